"""Minimal SVG emission for regions and curves."""

from __future__ import annotations

from dataclasses import dataclass, field
from xml.sax.saxutils import quoteattr

import numpy as np


@dataclass(frozen=True)
class Viewport:
    x0: float
    x1: float
    y0: float
    y1: float
    width: int = 480

    @property
    def height(self) -> int:
        return int(round(self.width * (self.y1 - self.y0) / (self.x1 - self.x0)))

    def map(self, z):
        z = np.asarray(z, dtype=complex)
        x = (z.real - self.x0) / (self.x1 - self.x0) * self.width
        y = (self.y1 - z.imag) / (self.y1 - self.y0) * self.height
        return x, y


DISC = Viewport(-1.1, 1.1, -1.1, 1.1)
HALFPLANE = Viewport(-0.5, 4.5, 0.0, 4.0)

PALETTE = ("#e07b00", "#c0392b", "#2e8b57", "#1f5fa8", "#7d3c98", "#555555")


def path_data(points, vp: Viewport, closed: bool = False) -> str:
    x, y = vp.map(points)
    cmds = [f"{'M' if k == 0 else 'L'}{a:.3f} {b:.3f}" for k, (a, b) in enumerate(zip(x, y))]
    return " ".join(cmds) + (" Z" if closed else "")


@dataclass
class SvgDocument:
    viewport: Viewport
    title: str = ""
    elements: list = field(default_factory=list)

    def path(self, points, cls: str, stroke="#000000", fill="none", dashed=False, closed=False,
             name: str | None = None, opacity: float | None = None):
        attrs = {"class": cls, "d": path_data(points, self.viewport, closed), "stroke": stroke,
                 "fill": fill, "stroke-width": "1.5"}
        if dashed:
            attrs["stroke-dasharray"] = "6 4"
        if opacity is not None:
            attrs["fill-opacity"] = f"{opacity:g}"
        if name:
            attrs["data-name"] = name
        self.elements.append(("path", attrs))

    def point(self, z, cls="point", filled=True, stroke="#000000", name: str | None = None):
        x, y = self.viewport.map(complex(z))
        attrs = {"class": cls, "cx": f"{float(x):.3f}", "cy": f"{float(y):.3f}", "r": "3",
                 "stroke": stroke, "fill": stroke if filled else "#ffffff"}
        if name:
            attrs["data-name"] = name
        self.elements.append(("circle", attrs))

    def axes(self, unit_circle: bool = False):
        vp = self.viewport
        self.path([complex(vp.x0, 0), complex(vp.x1, 0)], "axis", stroke="#999999")
        self.path([complex(0, vp.y0), complex(0, vp.y1)], "axis", stroke="#999999")
        if unit_circle:
            s = np.exp(2j * np.pi * np.linspace(0, 1, 361)[:-1])
            self.path(s, "frame", stroke="#999999", closed=True)

    def render(self) -> str:
        vp = self.viewport
        out = ['<?xml version="1.0" encoding="UTF-8"?>',
               f'<svg xmlns="http://www.w3.org/2000/svg" width="{vp.width}" height="{vp.height}" '
               f'viewBox="0 0 {vp.width} {vp.height}">']
        if self.title:
            out.append(f"<title>{self.title}</title>")
        out.append(f'<rect class="background" width="{vp.width}" height="{vp.height}" fill="#ffffff"/>')
        for tag, attrs in self.elements:
            body = " ".join(f"{k}={quoteattr(str(v))}" for k, v in attrs.items())
            out.append(f"<{tag} {body}/>")
        out.append("</svg>")
        return "\n".join(out) + "\n"


def draw_region(doc: SvgDocument, region, color="#1f5fa8", fill_opacity=0.25, pieces=True):
    """Filled region (closed regions only) plus one stroke per boundary
    piece; excluded pieces are dashed."""
    if region.closed and region.pieces:
        poly, _ = region.boundary_polyline()
        doc.path(poly.vertices, "region", stroke="none", fill=color,
                 closed=True, name=region.kind, opacity=fill_opacity)
    if pieces:
        for p in region.pieces:
            doc.path(p.vertices, "boundary", stroke=color, dashed=not p.included, name=p.name)
    for name, value, included in region.points:
        doc.point(value, filled=included, stroke=color, name=name)


def region_svg(region, viewport: Viewport) -> str:
    doc = SvgDocument(viewport, title=f"{region.kind} at z0 = {region.z0}")
    doc.axes(unit_circle=viewport is DISC)
    draw_region(doc, region)
    return doc.render()

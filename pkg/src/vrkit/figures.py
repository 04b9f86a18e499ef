"""The five reference figures as SVG documents."""

from __future__ import annotations

import cmath
import math
import re

import numpy as np

from . import disc, halfplane
from .svg import DISC, HALFPLANE, PALETTE, SvgDocument, draw_region

FIGURES = ("fig1", "fig2", "fig4", "fig5", "fig6")
FIG_RESOLUTION = 1e-4


def fig1() -> SvgDocument:
    """V_I(1+i) and V_I*(1+i) with their four boundary curves; excluded
    curves dashed."""
    z0 = 1 + 1j
    doc = SvgDocument(HALFPLANE, "VI(1+i) and VIstar(1+i)")
    doc.axes()
    vi = halfplane.region_VI(z0, eta_max=4.0, resolution=FIG_RESOLUTION)
    vis = halfplane.region_VIstar(z0, xi_max=4.5, resolution=FIG_RESOLUTION)
    draw_region(doc, vi, PALETTE[3], pieces=False)
    draw_region(doc, vis, PALETTE[0], pieces=False)
    for region, color in ((vi, PALETTE[3]), (vis, PALETTE[0])):
        for p in region.pieces:
            if p.name in ("C", "D", "Cstar", "Dstar"):
                doc.path(p.vertices, "boundary", stroke=color, dashed=not p.included, name=p.name)
    return doc


def fig2() -> SvgDocument:
    z0 = 0.9 * cmath.exp(1j * math.pi / 4)
    doc = SvgDocument(DISC, "VU and VUstar at 0.9 exp(i pi/4)")
    doc.axes(unit_circle=True)
    draw_region(doc, disc.region_VU(z0, resolution=FIG_RESOLUTION), PALETTE[3])
    draw_region(doc, disc.region_VUstar(z0, resolution=FIG_RESOLUTION), PALETTE[0])
    return doc


def fig4() -> SvgDocument:
    z0 = 0.9 * cmath.exp(1j * math.pi / 4)
    doc = SvgDocument(DISC, "VT(tau) at 0.9 exp(i pi/4), tau = 0.1, 0.5, 0.9")
    doc.axes(unit_circle=True)
    for tau, color in zip((0.1, 0.5, 0.9), PALETTE):
        draw_region(doc, disc.region_VT(z0, tau, resolution=FIG_RESOLUTION), color)
    return doc


def fig5() -> SvgDocument:
    """V_R (green) above V_R>= (red) above V_T = V_U (orange)."""
    z0 = 1 / 3 + 0.5j
    doc = SvgDocument(DISC, "VT, VRgeq and VR at 1/3 + i/2")
    doc.axes(unit_circle=True)
    for region, color in ((disc.region_VR(z0, resolution=FIG_RESOLUTION), PALETTE[2]),
                          (disc.region_VRgeq(z0, resolution=FIG_RESOLUTION), PALETTE[1]),
                          (disc.region_VU(z0, resolution=FIG_RESOLUTION), PALETTE[0])):
        poly, _ = region.boundary_polyline()
        doc.path(poly.vertices, "region", stroke=color, fill=color, closed=True,
                 name="VT" if region.kind == "VU" else region.kind, opacity=0.35)
    doc.point(z0, name="z0")
    return doc


def fig6() -> SvgDocument:
    """The zero-derivative region: the lens between C and -C."""
    z0 = 1 / 3 + 0.5j
    doc = SvgDocument(DISC, "VR0 at 1/3 + i/2")
    doc.axes(unit_circle=True)
    draw_region(doc, disc.region_VR0(z0, resolution=FIG_RESOLUTION), PALETTE[4])
    for p in (z0 ** 2, -z0 ** 2):
        doc.point(p, name="corner")
    return doc


def figure(name: str) -> SvgDocument:
    try:
        return {"fig1": fig1, "fig2": fig2, "fig4": fig4, "fig5": fig5, "fig6": fig6}[name]()
    except KeyError:
        raise ValueError(f"unknown figure {name!r}; expected one of {FIGURES}") from None


def count_paths(svg: str, cls: str) -> int:
    """Number of ``<path>`` elements of the given class."""
    return len(re.findall(rf'<path class="{re.escape(cls)}"', svg))

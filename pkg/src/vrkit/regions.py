"""Value regions: boundary pieces with inclusion flags plus a classifier."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .geometry import Location, Polyline, polyline_distance, winding_contains_many

DEFAULT_TOL = 1e-9


class Where(str, enum.Enum):
    INTERIOR = "interior"
    AT_Z0 = "at_z0"
    ON_C = "on_c"
    ON_D_EXCLUDED = "on_d_excluded"
    BOUNDARY = "boundary"
    BOUNDARY_EXCLUDED = "boundary_excluded"
    OUTSIDE = "outside"


@dataclass(frozen=True)
class Verdict:
    member: bool
    where: Where

    def __bool__(self):
        return self.member


@dataclass(frozen=True, eq=False)
class BoundaryPiece:
    name: str
    vertices: np.ndarray
    included: bool

    def __post_init__(self):
        object.__setattr__(self, "vertices", np.asarray(self.vertices, dtype=complex).ravel())


# A classifier maps (points, tol) to (member flags, Where codes).
Classifier = Callable[[np.ndarray, float], tuple]


@dataclass(frozen=True, eq=False)
class Region:
    """A value region.

    ``pieces`` are consecutive boundary curves (the last vertex of one piece
    is the first of the next) and, when ``closed``, they bound the region.
    ``points`` lists isolated special points ``(name, value, included)``.
    ``classifier`` is the exact analytic membership test, if one exists.
    """

    kind: str
    z0: complex
    pieces: tuple
    closed: bool = True
    classifier: Classifier | None = field(default=None, repr=False)
    params: dict = field(default_factory=dict)
    points: tuple = ()
    mode: str = "analytic"

    def classify_many(self, ws, tol: float = DEFAULT_TOL):
        ws = np.asarray(ws, dtype=complex).ravel()
        if self.classifier is None:
            return self.winding_classify_many(ws, tol)
        return self.classifier(ws, tol)

    def classify(self, w: complex, tol: float = DEFAULT_TOL) -> Verdict:
        m, where = self.classify_many([complex(w)], tol)
        return Verdict(bool(m[0]), Where(where[0]))

    def contains(self, w, tol: float = DEFAULT_TOL):
        return self.classify_many(w, tol)[0]

    # -- polyline side -----------------------------------------------------

    def boundary_polyline(self) -> tuple:
        """Polyline of all pieces (closed if the region is) plus the piece
        index of every edge."""
        verts, owner = [], []
        for k, p in enumerate(self.pieces):
            v = p.vertices[:-1] if self.closed else p.vertices
            verts.append(v)
            owner.append(np.full(v.size, k))
        v = np.concatenate(verts)
        owner = np.concatenate(owner)
        keep = np.concatenate(([True], v[1:] != v[:-1]))
        if self.closed and v.size > 1 and v[0] == v[-1]:
            keep[-1] = False
        return Polyline(v[keep], closed=self.closed), owner[keep]

    def winding_classify_many(self, ws, tol: float = DEFAULT_TOL, validate: bool = True):
        """Membership from the discretised boundary alone (winding number plus
        per-piece inclusion flags)."""
        ws = np.asarray(ws, dtype=complex).ravel()
        poly, _ = self.boundary_polyline()
        loc = winding_contains_many(poly, ws, tol, validate=validate)
        # a boundary point is excluded as soon as it is within tol of an excluded piece
        piece_in = np.ones(ws.size, dtype=bool)
        for p in self.pieces:
            if not p.included and p.vertices.size > 1:
                piece_in &= polyline_distance(Polyline.from_points(p.vertices), ws) > tol
        member = (loc == Location.INSIDE) | ((loc == Location.BOUNDARY) & piece_in)
        where = np.where(loc == Location.INSIDE, Where.INTERIOR.value,
                         np.where(loc == Location.OUTSIDE, Where.OUTSIDE.value,
                                  np.where(piece_in, Where.BOUNDARY.value,
                                           Where.BOUNDARY_EXCLUDED.value)))
        for name, value, included in self.points:
            near = np.abs(ws - value) <= tol
            member = np.where(near, included, member)
            where = np.where(near, Where.AT_Z0.value if name == "z0" else
                             (Where.BOUNDARY.value if included else Where.BOUNDARY_EXCLUDED.value), where)
        return member, where

    def vertices(self) -> np.ndarray:
        return np.concatenate([p.vertices for p in self.pieces]) if self.pieces else np.array([self.z0])


def point_region(kind: str, z0: complex, point: complex, params=None) -> Region:
    """A region that is a single point."""
    point = complex(point)

    def classify(ws, tol):
        near = np.abs(ws - point) <= tol
        return near, np.where(near, Where.AT_Z0.value, Where.OUTSIDE.value)

    return Region(kind, complex(z0), (), closed=False, classifier=classify,
                  params=dict(params or {}), points=(("z0", point, True),), mode="point")


def interval_region(kind: str, z0: complex, a: complex, b: complex,
                    a_included: bool, b_included: bool, params=None) -> Region:
    """A segment [a, b] with optionally open ends (degenerate real-z0 cases)."""
    a, b = complex(a), complex(b)
    e = b - a

    def classify(ws, tol):
        u = ((ws - a) * np.conj(e)).real / abs(e) ** 2
        foot = a + np.clip(u, 0, 1) * e
        on = np.abs(ws - foot) <= tol
        at_a = np.abs(ws - a) <= tol
        at_b = np.abs(ws - b) <= tol
        member = on & ~(at_a & ~a_included) & ~(at_b & ~b_included)
        where = np.where(member, Where.INTERIOR.value,
                         np.where(on, Where.BOUNDARY_EXCLUDED.value, Where.OUTSIDE.value))
        where = np.where(member & (np.abs(ws - z0) <= tol), Where.AT_Z0.value, where)
        return member, where

    pieces = (BoundaryPiece("interval", np.array([a, b]), True),)
    return Region(kind, complex(z0), pieces, closed=False, classifier=classify,
                  params=dict(params or {}, interval=[a_included, b_included]), mode="interval")

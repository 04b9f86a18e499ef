"""Complex-arithmetic kernel and planar geometry.

Points of the plane are plain Python ``complex`` numbers (or numpy complex
arrays for the vectorised helpers).  Everything here is a pure function of its
inputs.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Sequence

import numpy as np
import shapely
from shapely.geometry import LinearRing, LineString, Polygon

from .errors import (BranchAmbiguity, BranchCut, DegenerateInput,
                     MalformedBoundary, PoleAtOne)

REL_TOL = 1e-12


def _cross(a, b):
    """z-component of the planar cross product of complex numbers a and b."""
    return (np.conj(a) * b).imag


def check_finite(*points) -> None:
    for p in points:
        if not np.all(np.isfinite(np.asarray(p, dtype=complex))):
            raise ValueError(f"non-finite coordinate in {p!r}")


# ---------------------------------------------------------------------------
# circles and lines

@dataclass(frozen=True)
class Circle:
    center: complex
    radius: float

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError("circle radius must be strictly positive")

    def contains(self, w, tol=0.0):
        return np.abs(np.asarray(w) - self.center) <= self.radius + tol

    def signed_distance(self, w):
        """Positive inside the closed disc, negative outside."""
        return self.radius - np.abs(np.asarray(w) - self.center)

    def isclose(self, other, rel=REL_TOL) -> bool:
        if not isinstance(other, Circle):
            return False
        scale = max(1.0, abs(self.center), self.radius)
        return (abs(self.center - other.center) <= rel * scale
                and abs(self.radius - other.radius) <= rel * scale)


@dataclass(frozen=True)
class Line:
    point: complex
    direction: complex

    def __post_init__(self):
        if abs(abs(self.direction) - 1.0) > 1e-12:
            raise ValueError("line direction must have unit modulus")

    def signed_distance(self, w):
        """Positive to the left of the direction of travel."""
        return _cross(self.direction, np.asarray(w) - self.point)

    def isclose(self, other, rel=REL_TOL) -> bool:
        if not isinstance(other, Line):
            return False
        parallel = abs(_cross(self.direction, other.direction)) <= rel
        through = abs(_cross(self.direction, other.point - self.point)) <= rel * max(
            1.0, abs(self.point), abs(other.point))
        return bool(parallel and through)


CircleOrLine = Circle | Line


def circle_through(p: complex, q: complex, r: complex) -> CircleOrLine:
    """The generalised circle through three pairwise distinct points."""
    p, q, r = complex(p), complex(q), complex(r)
    check_finite(p, q, r)
    dists = (abs(p - q), abs(q - r), abs(r - p))
    scale = max(dists)
    if min(dists) <= REL_TOL * max(scale, 1e-300):
        raise DegenerateInput(f"points {p}, {q}, {r} are not pairwise distinct")
    a, b = q - p, r - p
    cross = _cross(a, b)
    if abs(cross) < REL_TOL * scale * scale:
        far = max((q, r), key=lambda v: abs(v - p))
        d = far - p
        return Line(point=p, direction=d / abs(d))
    center = p - 1j * (abs(a) ** 2 * b - abs(b) ** 2 * a) / (2.0 * cross)
    radius = (abs(center - p) + abs(center - q) + abs(center - r)) / 3.0
    return Circle(center=complex(center), radius=float(radius))


# ---------------------------------------------------------------------------
# square roots along paths

def branch_sqrt_path(samples: Sequence[complex], initial_root: complex,
                     zero_tol: float | None = None) -> np.ndarray:
    """Continue a square root along a sampled path.

    Each output is the root candidate nearer to its predecessor; the first is
    pinned by ``initial_root``.  Raises BranchAmbiguity when a sample is
    (numerically) zero or when two consecutive samples are too far apart to
    tell the candidates apart.
    """
    s = np.asarray(samples, dtype=complex)
    if s.ndim != 1 or s.size == 0:
        raise ValueError("samples must be a non-empty 1-d sequence")
    check_finite(s, initial_root)
    scale = float(np.max(np.abs(s)))
    if zero_tol is None:
        zero_tol = REL_TOL * scale
    if np.any(np.abs(s) <= zero_tol):
        k = int(np.argmax(np.abs(s) <= zero_tol))
        raise BranchAmbiguity(f"sample {k} is within {zero_tol:g} of the branch point 0")
    r0 = complex(initial_root)
    if abs(r0 * r0 - s[0]) > 1e-10 * max(abs(s[0]), 1e-300):
        raise ValueError("initial_root does not square to samples[0]")

    p = np.sqrt(s)
    # relative sign between consecutive principal roots
    stay = np.abs(p[1:] - p[:-1])
    flip = np.abs(p[1:] + p[:-1])
    flips = flip < stay
    step = np.minimum(stay, flip)
    bad = step >= 0.5 * np.minimum(np.abs(p[1:]), np.abs(p[:-1]))
    if np.any(bad):
        k = int(np.argmax(bad)) + 1
        raise BranchAmbiguity(f"path step into sample {k} is too coarse to continue the root")
    signs = np.concatenate(([1.0], np.cumprod(np.where(flips, -1.0, 1.0))))
    first = 1.0 if abs(p[0] - r0) <= abs(p[0] + r0) else -1.0
    return first * signs * p


# ---------------------------------------------------------------------------
# Moebius-type transforms

def sqrt_side(w):
    """w -> (sqrt(w) - 1)/(sqrt(w) + 1), principal root with sqrt(1) = 1."""
    w = np.asarray(w, dtype=complex)
    on_cut = (w.imag == 0) & (w.real <= 0)
    if np.any(on_cut):
        raise BranchCut("sqrt_side is undefined on (-inf, 0]")
    r = np.sqrt(w)
    out = (r - 1.0) / (r + 1.0)
    return out if out.ndim else complex(out)


def square_side(z):
    """z -> (1 + z)^2 / (1 - z)^2, the inverse of ``sqrt_side`` on the disc."""
    z = np.asarray(z, dtype=complex)
    if np.any(z == 1):
        raise PoleAtOne("square_side has a pole at z = 1")
    out = ((1.0 + z) / (1.0 - z)) ** 2
    return out if out.ndim else complex(out)


def square_side_derivative(z):
    z = np.asarray(z, dtype=complex)
    return 4.0 * (1.0 + z) / (1.0 - z) ** 3


def cayley(w):
    """Upper half-plane onto the unit disc, infinity to 1."""
    w = np.asarray(w, dtype=complex)
    out = (w - 1j) / (w + 1j)
    return out if out.ndim else complex(out)


def inv_cayley(z):
    z = np.asarray(z, dtype=complex)
    if np.any(z == 1):
        raise PoleAtOne("inverse Cayley transform has a pole at z = 1")
    out = 1j * (1.0 + z) / (1.0 - z)
    return out if out.ndim else complex(out)


_MOBIUS = {
    "cayley": cayley,
    "inv_cayley": inv_cayley,
    "sqrt_side": sqrt_side,
    "square_side": square_side,
}


def mobius(kind: str, w):
    try:
        fn = _MOBIUS[kind]
    except KeyError:
        raise ValueError(f"unknown transform {kind!r}; expected one of {sorted(_MOBIUS)}")
    check_finite(w)
    return fn(w)


# ---------------------------------------------------------------------------
# polylines and winding-number membership

class Location(enum.Enum):
    INSIDE = "inside"
    BOUNDARY = "boundary"
    OUTSIDE = "outside"


@dataclass(frozen=True, eq=False)
class Polyline:
    vertices: np.ndarray
    closed: bool = False

    def __post_init__(self):
        v = np.asarray(self.vertices, dtype=complex).ravel()
        check_finite(v)
        if v.size < 2:
            raise ValueError("a polyline needs at least two vertices")
        if np.any(v[1:] == v[:-1]):
            raise ValueError("consecutive polyline vertices must be distinct")
        if self.closed and v[0] == v[-1]:
            raise ValueError("closed polylines keep closure implicit (first != last)")
        object.__setattr__(self, "vertices", v)

    @classmethod
    def from_points(cls, points, closed=False) -> "Polyline":
        """Build a polyline, dropping repeated consecutive points."""
        v = np.asarray(points, dtype=complex).ravel()
        keep = np.concatenate(([True], v[1:] != v[:-1]))
        v = v[keep]
        if closed and v.size > 1 and v[0] == v[-1]:
            v = v[:-1]
        return cls(v, closed)

    def edges(self):
        v = self.vertices
        if self.closed:
            return v, np.roll(v, -1)
        return v[:-1], v[1:]

    def __len__(self):
        return self.vertices.size


def _as_line(poly: Polyline):
    xy = np.column_stack([poly.vertices.real, poly.vertices.imag])
    return LinearRing(xy) if poly.closed else LineString(xy)


def _as_points(points):
    points = np.asarray(points, dtype=complex).ravel()
    return shapely.points(points.real, points.imag)


def polyline_distance(poly: Polyline, points):
    """Euclidean distance from each point to the polyline."""
    return shapely.distance(_as_line(poly), _as_points(points))


def winding_numbers(poly: Polyline, points, chunk=1024) -> np.ndarray:
    """Winding number of a closed polyline around each point (Sunday's rule)."""
    points = np.asarray(points, dtype=complex).ravel()
    a, b = poly.edges()
    out = np.zeros(points.size, dtype=int)
    for lo in range(0, points.size, chunk):
        p = points[lo:lo + chunk, None]
        left = _cross(b - a, p - a)
        up = (a.imag <= p.imag) & (b.imag > p.imag) & (left > 0)
        down = (a.imag > p.imag) & (b.imag <= p.imag) & (left < 0)
        out[lo:lo + chunk] = up.sum(axis=1) - down.sum(axis=1)
    return out


def check_simple(poly: Polyline) -> None:
    ring = LinearRing(np.column_stack([poly.vertices.real, poly.vertices.imag]))
    if not ring.is_simple:
        raise MalformedBoundary("boundary polyline intersects itself")


def winding_contains_many(boundary: Polyline, points, tol: float,
                          validate: bool = True) -> np.ndarray:
    """Vectorised ``winding_contains``; returns an array of Location values."""
    if not boundary.closed:
        raise ValueError("winding membership needs a closed polyline")
    if validate:
        check_simple(boundary)
    points = np.asarray(points, dtype=complex).ravel()
    dist = polyline_distance(boundary, points)
    # a simple closed curve has winding number +-1 exactly on its interior,
    # so the even-odd test of a prepared polygon gives the same verdict
    polygon = Polygon(np.column_stack([boundary.vertices.real, boundary.vertices.imag]))
    shapely.prepare(polygon)
    inside = shapely.contains_xy(polygon, points.real, points.imag)
    loc = np.where(inside, Location.INSIDE, Location.OUTSIDE).astype(object)
    loc[dist <= tol] = Location.BOUNDARY
    return loc


def winding_contains(boundary: Polyline, w: complex, tol: float) -> Location:
    check_finite(w)
    return winding_contains_many(boundary, [w], tol)[0]


def is_convex(poly: Polyline, slack: float = 1e-10) -> bool:
    """Cross products of consecutive edges are single-signed up to ``slack``."""
    v = poly.vertices
    e = np.roll(v, -1) - v
    e = e / np.abs(e)
    turn = _cross(e, np.roll(e, -1))
    return bool(np.all(turn >= -slack) or np.all(turn <= slack))


# ---------------------------------------------------------------------------
# adaptive curve sampling

def sample_curve(f: Callable[[np.ndarray], np.ndarray], a: float, b: float,
                 tol: float = 1e-6, n0: int = 65, max_points: int = 200_000):
    """Sample a parametric curve on [a, b], bisecting until every chord's
    midpoint deviation is below ``tol``.  ``f`` must accept arrays."""
    s = np.linspace(a, b, n0)
    z = np.asarray(f(s), dtype=complex)
    while True:
        mid = 0.5 * (s[:-1] + s[1:])
        zm = np.asarray(f(mid), dtype=complex)
        dev = np.abs(zm - 0.5 * (z[:-1] + z[1:]))
        split = dev > tol
        if not np.any(split) or s.size + split.sum() > max_points:
            return s, z
        s_new = np.empty(s.size + split.sum())
        z_new = np.empty(s_new.size, dtype=complex)
        idx = np.arange(s.size) + np.concatenate(([0], np.cumsum(split)))
        s_new[idx] = s
        z_new[idx] = z
        ins = idx[:-1][split] + 1
        s_new[ins] = mid[split]
        z_new[ins] = zm[split]
        s, z = s_new, z_new


# ---------------------------------------------------------------------------
# exact membership for regions bounded by circular arcs and segments

@dataclass(frozen=True)
class Arc:
    """Generalised circular arc from ``start`` through ``mid`` to ``end``."""

    start: complex
    mid: complex
    end: complex
    name: str = ""
    included: bool = True

    @cached_property
    def support(self) -> CircleOrLine:
        return circle_through(self.start, self.mid, self.end)

    def _on_arc_side(self, q):
        chord = self.end - self.start
        ref = _cross(chord, self.mid - self.start)
        return _cross(chord, q - self.start) * ref > 0

    def points(self, n: int = 256) -> np.ndarray:
        """n points along the arc, endpoints included."""
        sup = self.support
        if isinstance(sup, Line):
            return self.start + np.linspace(0.0, 1.0, n) * (self.end - self.start)
        c = sup.center
        a0 = np.angle(self.start - c)
        am = np.angle(self.mid - c)
        a1 = np.angle(self.end - c)
        # sweep from a0 to a1 in the sense that passes am
        ccw = (a1 - a0) % (2 * np.pi)
        sweep = ccw if (am - a0) % (2 * np.pi) < ccw else ccw - 2 * np.pi
        ang = a0 + np.linspace(0.0, 1.0, n) * sweep
        pts = c + sup.radius * np.exp(1j * ang)
        pts[0], pts[-1] = self.start, self.end
        return pts

    def distance(self, w) -> np.ndarray:
        w = np.asarray(w, dtype=complex)
        end_d = np.minimum(np.abs(w - self.start), np.abs(w - self.end))
        sup = self.support
        if isinstance(sup, Line):
            e = self.end - self.start
            u = np.clip(((w - self.start) * np.conj(e)).real / abs(e) ** 2, 0.0, 1.0)
            return np.abs(w - (self.start + u * e))
        v = w - sup.center
        rv = np.abs(v)
        unit = np.where(rv > 0, v / np.where(rv > 0, rv, 1.0),
                        (self.start - sup.center) / sup.radius)
        q = sup.center + sup.radius * unit
        on = self._on_arc_side(q)
        return np.where(on, np.abs(rv - sup.radius), end_d)

    def ray_crossings(self, w, d, eps):
        """Crossings of the rays w + s*d (s > 0) with this arc, plus a
        per-point flag marking near-degenerate configurations."""
        w = np.asarray(w, dtype=complex)
        sup = self.support
        count = np.zeros(w.shape, dtype=int)
        if isinstance(sup, Line):
            e = self.end - self.start
            den = _cross(d, e)
            if abs(den) < 1e-12 * abs(e):
                degenerate = np.abs(_cross(e, w - self.start)) / abs(e) < eps
                return count, degenerate
            s = _cross(self.start - w, e) / den
            u = _cross(self.start - w, d) / den
            rel = eps / abs(e)
            hit = (s > 0) & (u > 0) & (u < 1)
            degenerate = (np.abs(u) < rel) | (np.abs(u - 1) < rel)
            return hit.astype(int), degenerate & (s > -eps)
        v = w - sup.center
        b = (np.conj(d) * v).real
        cc = np.abs(v) ** 2 - sup.radius ** 2
        disc = b * b - cc
        degenerate = np.abs(disc) < eps * sup.radius
        root = np.sqrt(np.maximum(disc, 0.0))
        for s in (-b - root, -b + root):
            q = w + s * d
            near_end = (np.abs(q - self.start) < eps) | (np.abs(q - self.end) < eps)
            hit = (disc > 0) & (s > 0) & self._on_arc_side(q)
            count += hit & ~near_end
            degenerate |= near_end & (s > -eps) & (disc > 0)
        return count, degenerate


# irrational-looking ray angles; retried in order when a ray grazes a vertex
_RAY_ANGLES = (0.4142135623, 2.2360679775, 1.7320508075, 3.6055512755,
               5.0990195136, 0.7071067812, 2.6457513111, 4.1231056256)


class ArcBoundary:
    """A closed curve made of generalised circular arcs.

    Membership is exact up to floating point: the boundary distance is the
    true distance to the arcs, and the inside test counts exact ray/arc
    intersections (even-odd rule).
    """

    def __init__(self, arcs: Sequence[Arc]):
        self.arcs = tuple(arcs)
        if not self.arcs:
            raise ValueError("an arc boundary needs at least one arc")
        for a, b in zip(self.arcs, self.arcs[1:] + self.arcs[:1]):
            if abs(a.end - b.start) > 1e-9 * max(1.0, abs(a.end)):
                raise MalformedBoundary("arcs do not join end to start")
        pts = np.array([p for a in self.arcs for p in (a.start, a.mid, a.end)])
        self.scale = float(max(np.ptp(pts.real), np.ptp(pts.imag), 1e-300))

    def distances(self, w):
        """Distance to each arc, shape (n_arcs, n_points)."""
        w = np.asarray(w, dtype=complex).ravel()
        return np.array([a.distance(w) for a in self.arcs])

    def distance(self, w):
        return self.distances(w).min(axis=0)

    def nearest(self, w):
        return self.distances(w).argmin(axis=0)

    def inside(self, w) -> np.ndarray:
        w = np.asarray(w, dtype=complex).ravel()
        eps = 1e-9 * self.scale
        # points on the boundary count as inside; every ray from them grazes it
        result = self.distance(w) <= eps
        todo = np.flatnonzero(~result)
        for angle in _RAY_ANGLES:
            if todo.size == 0:
                break
            d = complex(math.cos(angle), math.sin(angle))
            total = np.zeros(todo.size, dtype=int)
            bad = np.zeros(todo.size, dtype=bool)
            for arc in self.arcs:
                c, g = arc.ray_crossings(w[todo], d, eps)
                total += c
                bad |= g
            result[todo[~bad]] = (total[~bad] % 2) == 1
            todo = todo[bad]
        if todo.size:
            raise MalformedBoundary("could not find a non-degenerate ray for some points")
        return result

    def signed_distance(self, w):
        """Distance to the boundary, positive inside and negative outside."""
        w = np.asarray(w, dtype=complex).ravel()
        dist = self.distance(w)
        return np.where(self.inside(w), dist, -dist)

    def polyline(self, n_per_arc: int = 512) -> Polyline:
        pts = np.concatenate([a.points(n_per_arc)[:-1] for a in self.arcs])
        return Polyline.from_points(pts, closed=True)

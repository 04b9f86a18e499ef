"""Value regions of self-maps of the unit disc fixing 0.

Univalent maps with real coefficients (``VU``) and their inverses
(``VUstar``), typically real maps with prescribed ``f'(0) = tau`` (``VT``),
and maps with real coefficients under the constraints ``f'(0)`` free
(``VR``), ``>= 0`` (``VRgeq``), ``= 0`` (``VR0``) and ``> 0`` (``VRgt``).

Every region except ``VUstar`` is bounded by circular arcs, either in the
w-plane or in the plane of ``W = ((1 + w)/(1 - w))**2``, so membership is
decided exactly against those arcs.  The boundary polylines are sampled from
the closed-form curves and serve export and the independent winding test.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import BranchAmbiguity, BranchCut, DegenerateInput, OutOfDomain
from .geometry import (Arc, ArcBoundary, Line, Polyline, branch_sqrt_path, circle_through,
                       sample_curve, sqrt_side, square_side, square_side_derivative)
from .regions import (DEFAULT_TOL, BoundaryPiece, Region, Verdict, Where,
                      interval_region, point_region)

DISC_CURVE_KINDS = ("Cplus", "Cminus", "CplusStar", "CminusStar")
DEFAULT_RESOLUTION = 1e-7


def _check_z0(z0) -> complex:
    z0 = complex(z0)
    if not np.isfinite(z0) or not 0 < abs(z0) < 1:
        raise OutOfDomain(f"z0 = {z0} must satisfy 0 < |z0| < 1")
    return z0


# ---------------------------------------------------------------------------
# boundary curves of VU and VUstar

def _curve_sigma(kind: str, z0: complex, sigma: np.ndarray) -> np.ndarray:
    """Curve points at sigma = e^{-t} (unstarred) or sigma = e^{t} (starred),
    sigma in [0, 1].

    The inner square root of the closed form is continued from sigma = 1,
    where it is pinned by the curve passing through z0.  The value is then
    taken from a quotient that is algebraically equal to the closed form but
    free of cancellation at both ends of the curve.
    """
    sigma = np.asarray(sigma, dtype=float)
    plus = kind in ("Cplus", "CplusStar")
    starred = kind.endswith("Star")
    # squared inner root as an affine function of sigma, and its value at sigma = 1
    if plus and not starred:
        rad = lambda s: (1 + z0) ** 2 - 4 * z0 * s  # noqa: E731
        r1 = 1 - z0
    elif plus:
        rad = lambda s: s * (1 + z0) ** 2 - 4 * z0  # noqa: E731
        r1 = 1 - z0
    elif not starred:
        rad = lambda s: (z0 - 1) ** 2 + 4 * z0 * s  # noqa: E731
        r1 = 1 + z0
    else:
        rad = lambda s: s * (z0 - 1) ** 2 + 4 * z0  # noqa: E731
        r1 = 1 + z0

    flat = sigma.ravel()
    root = _continue_root(rad, r1, flat)
    if not starred:
        lead = (1 + z0) if plus else -(z0 - 1)
        out = 4 * z0 * flat / (lead + root) ** 2
    else:
        lead = np.sqrt(flat) * ((1 + z0) if plus else -(z0 - 1))
        out = 4 * z0 / (lead + root) ** 2
    return out.reshape(sigma.shape)


def _continue_root(rad, r1, targets, h0=1 / 64, h_min=1 / 65536):
    targets = np.asarray(targets, dtype=float)
    if targets.size == 0:
        return np.empty(0, dtype=complex)
    lo = float(targets.min())
    h = h0
    while True:
        n = max(2, int(math.ceil((1 - lo) / h)) + 1)
        grid = np.unique(np.concatenate((np.linspace(lo, 1.0, n), targets, [1.0])))[::-1]
        try:
            roots = branch_sqrt_path(rad(grid), r1)
            break
        except BranchAmbiguity:
            if h <= h_min:
                raise
            h /= 4
    pos = np.searchsorted(-grid, -targets)
    return roots[pos]


def disc_curve_point(kind: str, z0: complex, t):
    """Point(s) of C+, C- (t in [0, inf]) or C+*, C-* (t in [-inf, 0])."""
    z0 = _check_z0(z0)
    if kind not in DISC_CURVE_KINDS:
        raise ValueError(f"unknown curve kind {kind!r}; expected one of {DISC_CURVE_KINDS}")
    t = np.asarray(t, dtype=float)
    if np.any(np.isnan(t)):
        raise ValueError("t must not be NaN")
    if kind.endswith("Star"):
        if np.any(t > 0):
            raise OutOfDomain("starred curves are parametrised by t <= 0")
        sigma = np.exp(t)
    else:
        if np.any(t < 0):
            raise OutOfDomain("C+ and C- are parametrised by t >= 0")
        sigma = np.exp(-t)
    out = _curve_sigma(kind, z0, sigma)
    return complex(out) if out.ndim == 0 else out


def extremal_map(family: int, t: float, z):
    """Boundary-attaining slit maps f_{1,t}, f_{2,t}.

    f_{1,t} is the Koebe-type map with k(f(z)) = e^{-t} k(z), k(w) = w/(1+w)^2;
    it omits the slit [slit_tip(t), 1].  f_{2,t}(z) = -f_{1,t}(-z).
    """
    if family not in (1, 2):
        raise ValueError("family must be 1 or 2")
    if not t >= 0:
        raise OutOfDomain("t must be >= 0")
    z = np.asarray(z, dtype=complex)
    if np.any(np.abs(z) >= 1):
        raise OutOfDomain("extremal maps are evaluated in the open unit disc")
    zz = z if family == 1 else -z
    q = 4 * math.exp(-t) * zz / (1 + zz) ** 2
    out = q / (1 + np.sqrt(1 - q)) ** 2
    if family == 2:
        out = -out
    return complex(out) if out.ndim == 0 else out


def slit_tip(t: float) -> float:
    """Tip of the slit omitted by f_{1,t}; f_{2,t} omits the mirrored slit."""
    e = math.exp(t)
    return 2 * e - 1 - 2 * math.sqrt(e) * math.sqrt(e - 1)


# ---------------------------------------------------------------------------
# W-plane quantities

@dataclass(frozen=True)
class TauPoints:
    P: complex
    Q: complex
    tau: float


def _P(z0, tau):
    return (1 + z0) ** 2 / ((1 + z0) ** 2 - 4 * tau * z0)


def _Q(z0, tau):
    return 1 + 4 * tau * z0 / (1 - z0) ** 2


def tau_points(z0: complex, tau: float) -> TauPoints:
    z0 = _check_z0(z0)
    if not 0 <= tau <= 1:
        raise OutOfDomain("tau must lie in [0, 1]")
    den = (1 + z0) ** 2 - 4 * tau * z0
    if den == 0 or z0 == 1:
        raise ZeroDivisionError("P or Q has a vanishing denominator")
    return TauPoints(complex(_P(z0, tau)), complex(_Q(z0, tau)), float(tau))


def _s1(z0, tau, y):
    return 1 + 4 * tau * z0 / (1 - 2 * y * z0 + z0 * z0)


def _s2(z0, tau, x):
    return ((z0 + 1) ** 2 * (1 + z0 * (-4 + 4 * tau - 2 * x + z0))
            / ((z0 - 1) ** 2 * (1 - 2 * x * z0 + z0 * z0)))


def vt_arcs(z0: complex, tau: float, which: str, param):
    """s1 on y in [2 tau - 1, 1] or s2 on x in [-1, 2 tau - 1]."""
    z0 = _check_z0(z0)
    if not 0 < tau <= 1:
        raise OutOfDomain("tau must lie in (0, 1]")
    p = np.asarray(param, dtype=float)
    mid = 2 * tau - 1
    slack = 1e-15
    if which == "s1":
        if np.any(p < mid - slack) or np.any(p > 1 + slack):
            raise OutOfDomain(f"s1 is defined on [{mid}, 1]")
        out = _s1(z0, tau, p)
    elif which == "s2":
        if np.any(p < -1 - slack) or np.any(p > mid + slack):
            raise OutOfDomain(f"s2 is defined on [-1, {mid}]")
        out = _s2(z0, tau, p)
    else:
        raise ValueError("which must be 's1' or 's2'")
    return complex(out) if out.ndim == 0 else out


def vt_preimage(z0: complex, tau: float) -> ArcBoundary:
    """Boundary of W(tau): s1 from P to Q, then s2 from Q back to P."""
    z0 = _check_z0(z0)
    mid = 2 * tau - 1
    a1 = Arc(_s1(z0, tau, mid), _s1(z0, tau, (mid + 1) / 2), _s1(z0, tau, 1.0), "s1")
    a2 = Arc(_s2(z0, tau, -1.0), _s2(z0, tau, (mid - 1) / 2), _s2(z0, tau, mid), "s2")
    return ArcBoundary([a1, a2])


def vu_preimage(z0: complex) -> ArcBoundary:
    """Boundary of the W-plane image of VU: the P-arc from 1 to P(1) and the
    chord of Q-values back to 1."""
    z0 = _check_z0(z0)
    pa = Arc(_P(z0, 0.0), _P(z0, 0.5), _P(z0, 1.0), "P")
    qa = Arc(_Q(z0, 1.0), _Q(z0, 0.5), _Q(z0, 0.0), "Q")
    return ArcBoundary([pa, qa])


# ---------------------------------------------------------------------------
# exact classifiers against arc boundaries

@dataclass(frozen=True, eq=False)
class ArcClassifier:
    """Membership in a region bounded by circular arcs.

    With ``via_square`` the arcs live in the W-plane and points are mapped by
    ``square_side`` first; margins are scaled back by |dW/dw|.  Boundary
    points count as members unless they lie within tol of an excluded arc or
    an excluded point.
    """

    boundary: ArcBoundary
    z0: complex
    via_square: bool = False
    excluded_points: tuple = ()
    z0_member: bool = True

    def margins(self, ws):
        """Signed distance (positive inside) and distance to excluded arcs."""
        ws = np.asarray(ws, dtype=complex).ravel()
        excl = [k for k, a in enumerate(self.boundary.arcs) if not a.included]
        if not self.via_square:
            d = self.boundary.distances(ws)
            sd = np.where(self.boundary.inside(ws), d.min(axis=0), -d.min(axis=0))
            dx = d[excl].min(axis=0) if excl else np.full(ws.size, np.inf)
            return sd, dx
        ok = np.abs(ws) < 1
        sd = np.full(ws.size, -np.inf)
        dx = np.full(ws.size, np.inf)
        if ok.any():
            w = ws[ok]
            big = square_side(w)
            jac = np.abs(square_side_derivative(w))
            d = self.boundary.distances(big) / jac
            sd[ok] = np.where(self.boundary.inside(big), d.min(axis=0), -d.min(axis=0))
            if excl:
                dx[ok] = d[excl].min(axis=0)
        return sd, dx

    def __call__(self, ws, tol):
        ws = np.asarray(ws, dtype=complex).ravel()
        sd, dx = self.margins(ws)
        excluded = dx <= tol
        for p in self.excluded_points:
            excluded |= np.abs(ws - p) <= tol
        on = np.abs(sd) <= tol
        member = (sd > tol) & ~excluded | on & ~excluded
        where = np.where(sd > tol, Where.INTERIOR.value,
                         np.where(on, Where.BOUNDARY.value, Where.OUTSIDE.value))
        where = np.where(excluded & (sd >= -tol), Where.BOUNDARY_EXCLUDED.value, where)
        at = member & (np.abs(ws - self.z0) <= tol) & self.z0_member
        where = np.where(at, Where.AT_Z0.value, where)
        return member, where


def _sampled(f, a, b, resolution, n0=129):
    _, pts = sample_curve(f, a, b, tol=resolution, n0=n0)
    return pts


def _safe_sqrt_side(big):
    try:
        return sqrt_side(big)
    except BranchCut:
        # continue the root from the sample nearest W = 1
        k = int(np.argmin(np.abs(big - 1)))
        fwd = branch_sqrt_path(big[k:], np.sqrt(big[k]))
        bwd = branch_sqrt_path(big[:k + 1][::-1], np.sqrt(big[k]))[::-1]
        r = np.concatenate((bwd[:-1], fwd))
        return (r - 1) / (r + 1)


def _is_real(z0):
    return z0.imag == 0


def _conj_region(region: Region, kind: str, z0: complex) -> Region:
    pieces = tuple(BoundaryPiece(p.name, np.conj(p.vertices), p.included) for p in region.pieces)
    inner = region.classifier
    # winding-mode regions classify from the conjugated pieces directly
    clf = None if inner is None else (lambda ws, tol: inner(np.conj(np.asarray(ws, dtype=complex)), tol))
    return Region(kind, z0, pieces, region.closed, classifier=clf,
                  params=region.params, points=tuple((n, np.conj(v), i) for n, v, i in region.points),
                  mode=region.mode)


# ---------------------------------------------------------------------------
# region constructors

def region_VT(z0: complex, tau: float, resolution: float = DEFAULT_RESOLUTION, n0: int = 512) -> Region:
    """Values f(z0) of typically real self-maps with f(0) = 0, f'(0) = tau."""
    z0 = _check_z0(z0)
    if not 0 < tau <= 1:
        raise OutOfDomain("tau must lie in (0, 1]")
    params = {"tau": float(tau)}
    if tau == 1:
        return point_region("VT", z0, z0, params)
    tp = tau_points(z0, tau)
    if _is_real(z0):
        a, b = sorted((sqrt_side(tp.P).real, sqrt_side(tp.Q).real))
        return interval_region("VT", z0, a, b, True, True, params)
    mid = 2 * tau - 1
    s1 = _sampled(lambda y: _safe_sqrt_side(_s1(z0, tau, y)), mid, 1.0, resolution, n0)
    s2 = _sampled(lambda x: _safe_sqrt_side(_s2(z0, tau, x)), -1.0, mid, resolution, n0)
    pieces = (BoundaryPiece("s1", s1, True), BoundaryPiece("s2", s2, True))
    clf = ArcClassifier(vt_preimage(z0, tau), z0, via_square=True)
    return Region("VT", z0, pieces, classifier=clf, params=params)


def region_VU(z0: complex, resolution: float = DEFAULT_RESOLUTION) -> Region:
    """Values f(z0) of univalent self-maps with real coefficients, f(0) = 0."""
    z0 = _check_z0(z0)
    if _is_real(z0):
        return interval_region("VU", z0, 0.0, z0.real, False, True)
    cp = _sampled(lambda s: _curve_sigma("Cplus", z0, 1 - s), 0.0, 1.0, resolution)
    cm = _sampled(lambda s: _curve_sigma("Cminus", z0, 1 - s), 0.0, 1.0, resolution)
    cp[0], cp[-1], cm[0], cm[-1] = z0, 0.0, z0, 0.0
    pieces = (BoundaryPiece("Cplus", cp, True), BoundaryPiece("Cminus", cm[::-1], True))
    clf = ArcClassifier(vu_preimage(z0), z0, via_square=True, excluded_points=(0j,))
    return Region("VU", z0, pieces, classifier=clf, points=(("z0", z0, True), ("origin", 0j, False)))


def classify_VU(z0: complex, w: complex, tol: float = DEFAULT_TOL) -> Verdict:
    return region_VU_classifier(z0).verdict(w, tol)


@dataclass(frozen=True, eq=False)
class _ScalarClassifier:
    fn: object

    def verdict(self, w, tol):
        m, where = self.fn([complex(w)], tol)
        return Verdict(bool(m[0]), Where(where[0]))


def region_VU_classifier(z0):
    z0 = _check_z0(z0)
    if _is_real(z0):
        return _ScalarClassifier(interval_region("VU", z0, 0.0, z0.real, False, True).classifier)
    return _ScalarClassifier(ArcClassifier(vu_preimage(z0), z0, via_square=True, excluded_points=(0j,)))


def region_VUstar(z0: complex, resolution: float = DEFAULT_RESOLUTION) -> Region:
    """Preimages f^{-1}(z0) for univalent self-maps with real coefficients.

    Bounded by C+* (z0 to -1), the unit semicircle E on the side of z0
    (excluded) and C-* (1 to z0).  No arc structure is available, so
    membership uses the winding number of the sampled boundary.
    """
    z0 = _check_z0(z0)
    if _is_real(z0):
        if z0.real > 0:
            return interval_region("VUstar", z0, z0.real, 1.0, True, False)
        return interval_region("VUstar", z0, -1.0, z0.real, False, True)
    if z0.imag < 0:
        return _conj_region(region_VUstar(z0.conjugate(), resolution), "VUstar", z0)
    cp = _sampled(lambda s: _curve_sigma("CplusStar", z0, 1 - s), 0.0, 1.0, resolution)
    cm = _sampled(lambda s: _curve_sigma("CminusStar", z0, s), 0.0, 1.0, resolution)
    cp[0], cp[-1], cm[0], cm[-1] = z0, -1.0, 1.0, z0
    n_e = max(65, int(math.ceil(math.pi / math.sqrt(8 * resolution))) + 1)
    e = np.exp(1j * np.linspace(math.pi, 0.0, n_e))
    e[0], e[-1] = -1.0, 1.0
    pieces = (BoundaryPiece("CplusStar", cp, True), BoundaryPiece("E", e, False),
              BoundaryPiece("CminusStar", cm, True))
    region = Region("VUstar", z0, pieces, points=(("z0", z0, True), ("minus_one", -1 + 0j, False),
                                                  ("one", 1 + 0j, False)), mode="winding")
    return region


def _lens_arcs(z0):
    """Arcs of the circles through (1, z0, -z0) and (-1, -z0, z0) bounding VR."""
    c1 = circle_through(1.0, z0, -z0)
    if isinstance(c1, Line):
        raise DegenerateInput("1, z0, -z0 are collinear (z0 real)")
    u = 1j * z0 / abs(z0)
    cands = (c1.center + c1.radius * u, c1.center - c1.radius * u)
    side1 = (np.conj(z0) * 1.0).imag
    mids = [m for m in cands if (np.conj(z0) * m).imag * side1 < 0]
    m1 = mids[0] if mids else min(cands, key=abs)
    return Arc(z0, m1, -z0, "circle1"), Arc(-z0, -m1, z0, "circle2")


def region_VR(z0: complex, resolution: float = DEFAULT_RESOLUTION) -> Region:
    """Values of self-maps with real coefficients and f(0) = 0: a lens."""
    z0 = _check_z0(z0)
    if _is_real(z0):
        raise DegenerateInput("1, z0, -z0 are collinear (z0 real)")
    arcs = _lens_arcs(z0)
    return _arc_region("VR", z0, arcs, resolution, points=(("z0", z0, True),))


def rc_curve(name: str, z0: complex, x):
    """Curves A, B, C bounding VRgeq, x in [0, 1]."""
    z0 = complex(z0)
    x = np.asarray(x, dtype=float)
    if name == "A":
        out = z0 * (z0 - x) / (z0 * x - 1)
    elif name == "B":
        out = z0 * (z0 + x) / (z0 * x + 1)
    elif name == "C":
        out = z0 * z0 * (z0 + 2 * x - 1) / (1 + 2 * x * z0 - z0)
    else:
        raise ValueError("curve name must be A, B or C")
    return complex(out) if out.ndim == 0 else out


def _rc_arc(name, z0, a, b, included=True, sign=1):
    f = lambda x: sign * rc_curve(name, z0, x)  # noqa: E731
    return Arc(f(a), f((a + b) / 2), f(b), name if sign == 1 else "minus" + name, included)


def _vrgeq_arcs(z0, c_included=True):
    return (_rc_arc("A", z0, 0.0, 1.0), _rc_arc("B", z0, 1.0, 0.0),
            _rc_arc("C", z0, 1.0, 0.0, included=c_included))


def _arc_region(kind, z0, arcs, resolution, points=(), params=None, z0_member=True):
    pieces = []
    for a in arcs:
        r = abs(a.support.radius) if hasattr(a.support, "radius") else 1.0
        # chord sagitta h^2/(8r) <= resolution
        n = max(65, int(math.ceil(abs(a.end - a.start) * 4 / math.sqrt(8 * resolution / max(r, 1e-12)))))
        n = min(n, 20001)
        pieces.append(BoundaryPiece(a.name, a.points(n), a.included))
    excl = tuple(v for name, v, inc in points if not inc)
    clf = ArcClassifier(ArcBoundary(arcs), z0, excluded_points=excl, z0_member=z0_member)
    return Region(kind, z0, tuple(pieces), classifier=clf, params=dict(params or {}), points=points)


def _rc_interval(kind, z0, names):
    vals = [rc_curve(n, z0, x).real for n in names for x in (0.0, 1.0)]
    return interval_region(kind, z0, min(vals), max(vals), True, True)


def region_VRgeq(z0: complex, resolution: float = DEFAULT_RESOLUTION) -> Region:
    """Real coefficients and f'(0) >= 0: bounded by A, B and C."""
    z0 = _check_z0(z0)
    if _is_real(z0):
        return _rc_interval("VRgeq", z0, "ABC")
    return _arc_region("VRgeq", z0, _vrgeq_arcs(z0), resolution, points=(("z0", z0, True),))


def region_VRgt(z0: complex, resolution: float = DEFAULT_RESOLUTION) -> Region:
    """Real coefficients and f'(0) > 0: VRgeq without the curve C."""
    z0 = _check_z0(z0)
    if _is_real(z0):
        raise DegenerateInput("for real z0 the curve C is not a boundary piece of an open region")
    return _arc_region("VRgt", z0, _vrgeq_arcs(z0, c_included=False), resolution,
                       points=(("z0", z0, True),))


def classify_VRgt(z0: complex, w: complex, tol: float = DEFAULT_TOL) -> Verdict:
    z0 = _check_z0(z0)
    if _is_real(z0):
        raise DegenerateInput("for real z0 the curve C is not a boundary piece of an open region")
    clf = ArcClassifier(ArcBoundary(_vrgeq_arcs(z0, c_included=False)), z0)
    return _ScalarClassifier(clf).verdict(w, tol)


def region_VR0(z0: complex, resolution: float = DEFAULT_RESOLUTION) -> Region:
    """Real coefficients and f'(0) = 0: bounded by C and -C."""
    z0 = _check_z0(z0)
    if _is_real(z0):
        return _rc_interval("VR0", z0, "C")
    arcs = (_rc_arc("C", z0, 0.0, 1.0), _rc_arc("C", z0, 0.0, 1.0, sign=-1))
    return _arc_region("VR0", z0, arcs, resolution, z0_member=False)


REGION_BUILDERS = {
    "VU": region_VU,
    "VUstar": region_VUstar,
    "VR": region_VR,
    "VRgeq": region_VRgeq,
    "VRgt": region_VRgt,
    "VR0": region_VR0,
}


def disc_region(kind: str, z0: complex, tau: float | None = None, **kw) -> Region:
    if kind == "VT":
        if tau is None:
            raise ValueError("VT needs tau")
        return region_VT(z0, tau, **kw)
    try:
        return REGION_BUILDERS[kind](z0, **kw)
    except KeyError:
        raise ValueError(f"unknown disc region kind {kind!r}")


def preimage_polyline(boundary: ArcBoundary, n_per_arc: int = 512) -> Polyline:
    return boundary.polyline(n_per_arc)

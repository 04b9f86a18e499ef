"""Value regions of symmetric hydrodynamically normalised self-maps of the
upper half-plane, and of their inverses.

For ``z0 = xi0 + i eta0`` with ``xi0 > 0`` the forward region is

    {z0}  u  { w = xi + i eta :  xi0 eta0 / eta <= xi < xi0 eta / eta0 }

bounded by the hyperbola arc ``C`` (included) and the ray ``D`` (excluded
apart from ``z0``).  The inverse region sits below ``z0`` between ``D*``
(excluded), the hyperbola arc ``C*`` (included) and the positive real axis
(excluded).
"""

from __future__ import annotations

import numpy as np

from .errors import OutOfDomain
from .geometry import sample_curve
from .regions import DEFAULT_TOL, BoundaryPiece, Region, Verdict, Where

CURVE_KINDS = ("C", "D", "Cstar", "Dstar")


def _check_z0(z0):
    z0 = complex(z0)
    if not np.isfinite(z0) or not z0.imag > 0:
        raise ValueError(f"z0 = {z0} must lie in the upper half-plane")
    return z0


def _upper_sqrt(v):
    r = np.sqrt(np.asarray(v, dtype=complex))
    return np.where(r.imag < 0, -r, r)


def hp_curve_point(kind: str, z0: complex, t):
    """Point(s) of the boundary curve ``kind`` at parameter ``t >= 0``."""
    z0 = _check_z0(z0)
    if z0.real < 0:
        raise ValueError("curves are defined for Re z0 >= 0; reflect first")
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise ValueError("curve parameter must be >= 0")
    if kind == "C":
        out = _upper_sqrt(z0 * z0 - 2 * t)
    elif kind == "Cstar":
        out = _upper_sqrt(z0 * z0 + 2 * t)
    elif kind == "D":
        out = z0 + np.exp(1j * np.angle(z0)) * t
    elif kind == "Dstar":
        if np.any(t >= abs(z0)):
            raise OutOfDomain("D* is parametrised by t in [0, |z0|)")
        out = z0 - np.exp(1j * np.angle(z0)) * t
    else:
        raise ValueError(f"unknown curve kind {kind!r}; expected one of {CURVE_KINDS}")
    return complex(out) if out.ndim == 0 else out


def _reflect(z):
    return -np.conj(z)


def _prepare(z0, ws):
    """Broadcast z0 against the points and reflect pairs with Re z0 < 0."""
    ws = np.asarray(ws, dtype=complex).ravel()
    z0 = np.asarray(z0, dtype=complex)
    z0 = np.broadcast_to(z0.ravel() if z0.ndim else z0, ws.shape)
    if not np.all(np.isfinite(z0)) or np.any(~(z0.imag > 0)):
        raise ValueError("z0 must lie in the upper half-plane")
    flip = z0.real < 0
    return np.where(flip, _reflect(z0), z0), np.where(flip, _reflect(ws), ws)


def _finish(conds, codes):
    where = np.select(conds, [c.value for c in codes], Where.INTERIOR.value)
    member = np.isin(where, [Where.AT_Z0.value, Where.ON_C.value, Where.INTERIOR.value])
    return member, where


def _classify_vi(z0, ws, tol):
    z0, ws = _prepare(z0, ws)
    xi, eta = ws.real, ws.imag
    xi0, eta0 = z0.real, z0.imag
    at = np.abs(ws - z0) <= tol
    axis = xi0 == 0
    # Re z0 = 0: the ray z0 + is, s >= 0
    on_ray = (np.abs(xi) <= tol) & (eta >= eta0 - tol)
    with np.errstate(divide="ignore", invalid="ignore"):
        c_m = np.where(eta > 0, xi - xi0 * eta0 / np.where(eta > 0, eta, 1.0), -np.inf)
    d_m = xi0 * eta / eta0 - xi
    outside = (eta <= 0) | (c_m < -tol) | (d_m < -tol)
    return _finish(
        [at, axis & ~on_ray, axis, outside, np.abs(d_m) <= tol, np.abs(c_m) <= tol],
        [Where.AT_Z0, Where.OUTSIDE, Where.INTERIOR, Where.OUTSIDE, Where.ON_D_EXCLUDED, Where.ON_C])


def _classify_vistar(z0, ws, tol):
    z0, ws = _prepare(z0, ws)
    xi, eta = ws.real, ws.imag
    xi0, eta0 = z0.real, z0.imag
    at = np.abs(ws - z0) <= tol
    axis = xi0 == 0
    # Re z0 = 0: the segment z0 - it, t in [0, Im z0); the origin is excluded
    on_seg = (np.abs(xi) <= tol) & (eta > tol) & (eta <= eta0 + tol)
    origin = np.abs(ws) <= tol
    with np.errstate(divide="ignore", invalid="ignore"):
        c_m = np.where(eta > 0, xi0 * eta0 / np.where(eta > 0, eta, 1.0) - xi, np.inf)
    d_m = xi - xi0 * eta / eta0
    on_real = (np.abs(eta) <= tol) & (xi >= -tol)
    outside = (eta < -tol) | (c_m < -tol) | (d_m < -tol)
    return _finish(
        [at, axis & origin, axis & ~on_seg, axis, outside, on_real,
         np.abs(d_m) <= tol, np.abs(c_m) <= tol, eta <= 0],
        [Where.AT_Z0, Where.BOUNDARY_EXCLUDED, Where.OUTSIDE, Where.INTERIOR, Where.OUTSIDE,
         Where.BOUNDARY_EXCLUDED, Where.ON_D_EXCLUDED, Where.ON_C, Where.OUTSIDE])


def classify_VI(z0: complex, w: complex, tol: float = DEFAULT_TOL) -> Verdict:
    """Is ``w`` the value at ``z0`` of some symmetric normalised self-map?"""
    m, where = _classify_vi(z0, [w], tol)
    return Verdict(bool(m[0]), Where(where[0]))


def classify_VIstar(z0: complex, w: complex, tol: float = DEFAULT_TOL) -> Verdict:
    """Is ``w`` the preimage of ``z0`` under some symmetric normalised self-map?"""
    m, where = _classify_vistar(z0, [w], tol)
    return Verdict(bool(m[0]), Where(where[0]))


def classify_VI_many(z0, ws, tol=DEFAULT_TOL):
    """Vectorised classify_VI; ``z0`` may be one point or one per point.
    Returns (member flags, Where codes)."""
    return _classify_vi(z0, ws, tol)


def classify_VIstar_many(z0, ws, tol=DEFAULT_TOL):
    """Vectorised classify_VIstar; ``z0`` may be one point or one per point."""
    return _classify_vistar(z0, ws, tol)


# ---------------------------------------------------------------------------
# regions with exportable boundaries

def region_VI(z0: complex, eta_max: float | None = None, resolution: float = 1e-6) -> Region:
    """V_I(z0).  The unbounded region is cut at height ``eta_max`` (default
    50 Im z0) for export; the classifier is exact and ignores the cut."""
    z0 = _check_z0(z0)
    eta_max = 50 * z0.imag if eta_max is None else float(eta_max)
    if eta_max <= z0.imag:
        raise ValueError("eta_max must exceed Im z0")
    classify = lambda ws, tol: _classify_vi(z0, ws, tol)  # noqa: E731
    params = {"eta_max": eta_max}
    if z0.real == 0:
        ray = BoundaryPiece("ray", np.array([z0, complex(0, eta_max)]), True)
        return Region("VI", z0, (ray,), closed=False, classifier=classify, params=params,
                      points=(("z0", z0, True),))
    if z0.real < 0:
        mirrored = region_VI(_reflect(z0), eta_max, resolution)
        pieces = tuple(BoundaryPiece(p.name, _reflect(p.vertices)[::-1], p.included)
                       for p in reversed(mirrored.pieces))
        return Region("VI", z0, pieces, classifier=classify, params=params,
                      points=(("z0", z0, True),))
    xi0, eta0 = z0.real, z0.imag
    k = xi0 * eta0
    top_c = complex(k / eta_max, eta_max)
    top_d = complex(xi0 * eta_max / eta0, eta_max)
    t_c = ((xi0 ** 2 - eta0 ** 2) - (top_c.real ** 2 - top_c.imag ** 2)) / 2
    _, c_pts = sample_curve(lambda t: hp_curve_point("C", z0, t), 0.0, t_c, tol=resolution * eta_max)
    c_pts[0], c_pts[-1] = z0, top_c
    pieces = (
        BoundaryPiece("C", c_pts, True),
        BoundaryPiece("truncation", np.array([top_c, top_d]), True),
        BoundaryPiece("D", np.array([top_d, z0]), False),
    )
    return Region("VI", z0, pieces, classifier=classify, params=params, points=(("z0", z0, True),))


def region_VIstar(z0: complex, xi_max: float | None = None, resolution: float = 1e-6) -> Region:
    """V_I*(z0), cut at ``Re w = xi_max`` (default 50 Re z0) for export."""
    z0 = _check_z0(z0)
    classify = lambda ws, tol: _classify_vistar(z0, ws, tol)  # noqa: E731
    if z0.real == 0:
        seg = BoundaryPiece("segment", np.array([0j, z0]), True)
        return Region("VIstar", z0, (seg,), closed=False, classifier=classify,
                      params={}, points=(("z0", z0, True), ("origin", 0j, False)))
    if z0.real < 0:
        mirrored = region_VIstar(_reflect(z0), xi_max, resolution)
        pieces = tuple(BoundaryPiece(p.name, _reflect(p.vertices)[::-1], p.included)
                       for p in reversed(mirrored.pieces))
        return Region("VIstar", z0, pieces, classifier=classify, params=mirrored.params,
                      points=(("z0", z0, True),))
    xi0, eta0 = z0.real, z0.imag
    xi_max = 50 * xi0 if xi_max is None else float(xi_max)
    if xi_max <= xi0:
        raise ValueError("xi_max must exceed Re z0")
    k = xi0 * eta0
    end_c = complex(xi_max, k / xi_max)
    t_c = ((xi_max ** 2 - end_c.imag ** 2) - (xi0 ** 2 - eta0 ** 2)) / 2
    _, c_pts = sample_curve(lambda t: hp_curve_point("Cstar", z0, t), 0.0, t_c, tol=resolution * xi_max)
    c_pts[0], c_pts[-1] = z0, end_c
    pieces = (
        BoundaryPiece("Dstar", np.array([0j, z0]), False),
        BoundaryPiece("Cstar", c_pts, True),
        BoundaryPiece("truncation", np.array([end_c, complex(xi_max, 0)]), True),
        BoundaryPiece("axis", np.array([complex(xi_max, 0), 0j]), False),
    )
    return Region("VIstar", z0, pieces, classifier=classify, params={"xi_max": xi_max},
                  points=(("z0", z0, True),))

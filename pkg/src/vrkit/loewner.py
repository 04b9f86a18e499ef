"""Symmetric chordal Loewner flow.

The forward flow of a symmetric, hydrodynamically normalised self-map of the
upper half-plane is generated by

    w'(t) = sum_i  lam_i * w / (u_i - w**2),      u_i >= 0,

with a probability measure ``sum lam_i delta_{u_i}`` that may change with
time (``MeasurePath``).  A single atom ``U(t)`` gives the slit equation
(``Slit``).  The exponent family steers the point along
``xi = xi0 * (eta/eta0)**x`` and is integrated in the ``eta`` parametrisation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import OutOfRange, ToleranceUnreachable
from .ode import dopri_batch, hermite

DEFAULT_REL_TOL = 1e-10
DENOM_GUARD = 1e-14
STEP_FRACTION = 0.1  # |dw| <= 0.1 Im w per step

DOMAINS = ("halfline", "interval", "square")


@dataclass(frozen=True)
class DiscreteMeasure:
    """Finitely many weighted atoms.

    ``positions`` is 1-d for the half-line [0, inf) and the interval [0, pi];
    for the square domain it holds (x, y) rows and ``tau`` fixes the square
    ``-1 <= x <= 2 tau - 1 <= y <= 1``.
    """

    positions: tuple
    weights: tuple
    domain: str = "halfline"
    tau: float | None = None

    def __post_init__(self):
        pos = np.asarray(self.positions, dtype=float)
        wts = np.asarray(self.weights, dtype=float)
        if self.domain not in DOMAINS:
            raise ValueError(f"unknown domain {self.domain!r}")
        if wts.ndim != 1 or wts.size == 0 or len(pos) != wts.size:
            raise ValueError("need one weight per atom and at least one atom")
        if not np.all(np.isfinite(pos)) or not np.all(np.isfinite(wts)):
            raise ValueError("atoms must be finite")
        if np.any(wts <= 0):
            raise ValueError("atom weights must be positive")
        if abs(wts.sum() - 1.0) > 1e-12:
            raise ValueError(f"weights sum to {wts.sum():.17g}, not 1")
        if self.domain == "halfline" and np.any(pos < 0):
            raise ValueError("half-line atoms must be >= 0")
        if self.domain == "interval" and (np.any(pos < 0) or np.any(pos > math.pi)):
            raise ValueError("interval atoms must lie in [0, pi]")
        if self.domain == "square":
            if self.tau is None or not 0 < self.tau <= 1:
                raise ValueError("square-domain measures need tau in (0, 1]")
            pos = pos.reshape(-1, 2)
            mid = 2 * self.tau - 1
            eps = 1e-12
            x, y = pos[:, 0], pos[:, 1]
            if np.any(x < -1 - eps) or np.any(x > mid + eps) or np.any(y < mid - eps) or np.any(y > 1 + eps):
                raise ValueError("atom outside the square B")
        object.__setattr__(self, "positions", tuple(map(tuple, pos)) if pos.ndim == 2 else tuple(pos.tolist()))
        object.__setattr__(self, "weights", tuple(wts.tolist()))

    @classmethod
    def normalized(cls, positions, weights, **kw) -> "DiscreteMeasure":
        w = np.asarray(weights, dtype=float)
        w = w / w.sum()
        # push the rounding residue into the largest weight
        w[np.argmax(w)] += 1.0 - w.sum()
        return cls(tuple(np.asarray(positions).tolist()), tuple(w.tolist()), **kw)

    def __len__(self):
        return len(self.weights)


# ---------------------------------------------------------------------------
# driving specifications

@dataclass(frozen=True)
class SlitPiece:
    t_start: float
    t_end: float
    value: float
    end_value: float | None = None   # affine ramp to this value at t_end

    def at(self, t):
        if self.end_value is None or math.isinf(self.t_end):
            return np.full_like(np.asarray(t, dtype=float), self.value)
        s = (np.asarray(t) - self.t_start) / (self.t_end - self.t_start)
        return self.value + s * (self.end_value - self.value)


@dataclass(frozen=True)
class MeasurePiece:
    t_start: float
    t_end: float
    measure: DiscreteMeasure


def _check_pieces(pieces):
    if not pieces:
        raise ValueError("a driving needs at least one piece")
    if pieces[0].t_start != 0:
        raise ValueError("driving must start at t = 0")
    for a, b in zip(pieces, pieces[1:]):
        if a.t_end != b.t_start:
            raise ValueError("driving pieces must be contiguous and ordered")
    for p in pieces:
        if not p.t_end > p.t_start:
            raise ValueError("every piece needs t_end > t_start")


@dataclass(frozen=True)
class Slit:
    pieces: tuple

    def __post_init__(self):
        object.__setattr__(self, "pieces", tuple(self.pieces))
        _check_pieces(self.pieces)
        for p in self.pieces:
            vals = [p.value] + ([p.end_value] if p.end_value is not None else [])
            if min(vals) < 0:
                raise ValueError("slit driving values must be >= 0")

    @classmethod
    def constant(cls, value: float = 0.0, t_end: float = math.inf) -> "Slit":
        return cls((SlitPiece(0.0, t_end, value),))

    @property
    def t_end(self):
        return self.pieces[-1].t_end


@dataclass(frozen=True)
class MeasurePath:
    pieces: tuple

    def __post_init__(self):
        object.__setattr__(self, "pieces", tuple(self.pieces))
        _check_pieces(self.pieces)
        for p in self.pieces:
            if p.measure.domain != "halfline":
                raise ValueError("Loewner driving measures live on [0, inf)")

    @property
    def t_end(self):
        return self.pieces[-1].t_end


@dataclass(frozen=True)
class Exponent:
    """Driving ``U(eta) = (1+x)/(1-x) * (xi0**2 (eta/eta0)**(2x) + eta**2)``."""

    x: float
    z0: complex

    def __post_init__(self):
        if not -1 <= self.x < 1:
            raise OutOfRange(f"exponent x={self.x} outside [-1, 1)")
        z0 = complex(self.z0)
        if not (z0.real > 0 and z0.imag > 0):
            raise ValueError("exponent driving needs Re z0 > 0 and Im z0 > 0")
        object.__setattr__(self, "z0", z0)

    t_end = math.inf

    def U(self, eta):
        xi0, eta0, x = self.z0.real, self.z0.imag, self.x
        eta = np.asarray(eta, dtype=float)
        return (1 + x) / (1 - x) * (xi0 ** 2 * (eta / eta0) ** (2 * x) + eta ** 2)

    def xi(self, eta):
        """The closed-form trajectory ``xi0 (eta/eta0)**x``."""
        return self.z0.real * (np.asarray(eta, dtype=float) / self.z0.imag) ** self.x


DrivingSpec = Slit | MeasurePath | Exponent


def exponent_driving(x: float, z0: complex) -> DrivingSpec:
    if not -1 <= x < 1:
        raise OutOfRange(f"exponent x={x} outside [-1, 1)")
    z0 = complex(z0)
    if not (z0.real > 0 and z0.imag > 0):
        raise ValueError("exponent driving needs Re z0 > 0 and Im z0 > 0")
    if x == -1:
        return Slit.constant(0.0)
    return Exponent(float(x), z0)


# ---------------------------------------------------------------------------
# trajectories

@dataclass(frozen=True, eq=False)
class Trajectory:
    """Accepted integrator steps ``(t_k, w_k)`` with cubic dense output."""

    t: np.ndarray
    w: np.ndarray
    driving: object
    z0: complex
    dw_left: np.ndarray = field(repr=False, default=None)
    dw_right: np.ndarray = field(repr=False, default=None)

    @property
    def samples(self):
        return list(zip(self.t.tolist(), self.w.tolist()))

    @property
    def final(self) -> complex:
        return complex(self.w[-1])

    def at(self, t):
        """Dense output by cubic Hermite interpolation between steps."""
        t = np.asarray(t, dtype=float)
        if self.dw_left is None:
            raise ValueError("trajectory carries no derivative data")
        if np.any(t < self.t[0]) or np.any(t > self.t[-1]):
            raise ValueError("dense output requested outside the integrated range")
        k = np.clip(np.searchsorted(self.t, t, side="right") - 1, 0, self.t.size - 2)
        return hermite(self.t[k], self.t[k + 1], self.w[k], self.w[k + 1],
                       self.dw_left[k], self.dw_right[k], t)

    def resample(self, n: int):
        """``n`` equally spaced times over the whole trajectory and their points."""
        ts = np.linspace(self.t[0], self.t[-1], n)
        ws = self.at(ts)
        ws[0], ws[-1] = self.w[0], self.w[-1]
        return ts, ws


def _validate_start(z0):
    z0 = complex(z0)
    if not np.isfinite(z0) or not z0.imag > 0:
        raise ValueError(f"start point {z0} must lie in the upper half-plane")
    return z0


def _pack_measure_drivings(drivings, T):
    """Piece arrays (n, P) and atom arrays (n, P, A) for a batch of drivings."""
    n = len(drivings)
    P = max(len(d.pieces) for d in drivings)
    A = max(1 if isinstance(d, Slit) else max(len(p.measure) for p in d.pieces) for d in drivings)
    breaks = np.full((n, P), np.nan)
    tstart = np.zeros((n, P))
    u0 = np.zeros((n, P, A))
    du = np.zeros((n, P, A))
    lam = np.zeros((n, P, A))
    for i, d in enumerate(drivings):
        if d.t_end < T[i] * (1 - 1e-15):
            raise ValueError(f"driving {i} only covers [0, {d.t_end}] < T = {T[i]}")
        used = 0
        for k, p in enumerate(d.pieces):
            if p.t_start >= T[i]:
                break
            used = k + 1
            breaks[i, k] = min(p.t_end, T[i])
            tstart[i, k] = p.t_start
            if isinstance(p, SlitPiece):
                u0[i, k, 0] = p.value
                lam[i, k, 0] = 1.0
                if p.end_value is not None and math.isfinite(p.t_end):
                    du[i, k, 0] = (p.end_value - p.value) / (p.t_end - p.t_start)
            else:
                m = len(p.measure)
                u0[i, k, :m] = p.measure.positions
                lam[i, k, :m] = p.measure.weights
        # pad unused trailing segments with zero-length copies of the end time
        breaks[i, used:] = T[i]
        if used < P:
            u0[i, used:] = u0[i, used - 1]
            lam[i, used:] = lam[i, used - 1]
    return breaks, tstart, u0, du, lam


def _cap(t, y, f, idx):
    return STEP_FRACTION * y[:, 0].imag / (np.abs(f[:, 0]) + 1e-300)


def _guarded(den):
    if np.any(np.abs(den) < DENOM_GUARD):
        raise ToleranceUnreachable("Loewner denominator u - w^2 vanished")
    return den


def integrate_many(z0s: Sequence[complex], drivings: Sequence, T, rel_tol=DEFAULT_REL_TOL):
    """Integrate a batch of Slit/MeasurePath/Exponent drivings in lock-step."""
    if not 1e-13 <= rel_tol <= 1e-6:
        raise ValueError("rel_tol must lie in [1e-13, 1e-6]")
    z0s = np.array([_validate_start(z) for z in z0s], dtype=complex)
    n = z0s.size
    T = np.broadcast_to(np.asarray(T, dtype=float), (n,)).copy()
    if np.any(~(T > 0)):
        raise ValueError("T must be positive")
    if len(drivings) != n:
        raise ValueError("one driving per start point")

    out = [None] * n
    exp_i = [i for i, d in enumerate(drivings) if isinstance(d, Exponent)]
    mea_i = [i for i, d in enumerate(drivings) if not isinstance(d, Exponent)]
    if mea_i:
        ds = [drivings[i] for i in mea_i]
        breaks, tstart, u0, du, lam = _pack_measure_drivings(ds, T[mea_i])

        def rhs(t, y, idx, seg):
            w = y[:, 0]
            u = u0[idx, seg] + du[idx, seg] * (t - tstart[idx, seg])[:, None]
            den = _guarded(u - (w * w)[:, None])
            return (w * (lam[idx, seg] / den).sum(axis=1))[:, None]

        res = dopri_batch(rhs, np.zeros(len(mea_i)), z0s[mea_i][:, None], breaks,
                          rel_tol=rel_tol, step_cap=_cap)
        for j, i in enumerate(mea_i):
            out[i] = Trajectory(res.t[j], res.y[j][:, 0], drivings[i], complex(z0s[i]),
                                res.f_left[j][:, 0], res.f_right[j][:, 0])
    if exp_i:
        xs = np.array([drivings[i].x for i in exp_i])
        xi0 = np.array([drivings[i].z0.real for i in exp_i])
        eta0 = np.array([drivings[i].z0.imag for i in exp_i])
        coef = (1 + xs) / (1 - xs)

        def rhs(t, y, idx, seg):
            w = y[:, 0]
            eta = w.imag
            U = coef[idx] * (xi0[idx] ** 2 * (eta / eta0[idx]) ** (2 * xs[idx]) + eta ** 2)
            return (w / _guarded(U - w * w))[:, None]

        res = dopri_batch(rhs, np.zeros(len(exp_i)), z0s[exp_i][:, None], T[exp_i][:, None],
                          rel_tol=rel_tol, step_cap=_cap)
        for j, i in enumerate(exp_i):
            out[i] = Trajectory(res.t[j], res.y[j][:, 0], drivings[i], complex(z0s[i]),
                                res.f_left[j][:, 0], res.f_right[j][:, 0])
    return out


def integrate(z0: complex, driving, T: float, rel_tol: float = DEFAULT_REL_TOL) -> Trajectory:
    """Integrate one symmetric Loewner IVP from ``z0`` up to time ``T``."""
    return integrate_many([z0], [driving], T, rel_tol)[0]


# ---------------------------------------------------------------------------
# the exponent family in the eta parametrisation

def _eta_rhs(xs, xi0, eta0):
    coef = (1 + xs) / (1 - xs)

    def rhs(eta, y, idx, seg):
        xi = y[:, 0]
        U = coef[idx] * (xi0[idx] ** 2 * (eta / eta0[idx]) ** (2 * xs[idx]) + eta ** 2)
        mod2 = xi * xi + eta * eta
        w = xi + 1j * eta
        dxi = xi / eta * (U - mod2) / (U + mod2)
        dt = np.abs(U - w * w) ** 2 / (eta * (U + mod2))
        return np.column_stack([dxi, dt])

    return rhs


def exponent_endpoints(xs, z0: complex, etas, rel_tol: float = DEFAULT_REL_TOL):
    """Integrate ``d xi / d eta`` for every exponent in ``xs`` and report the
    points reached at the heights ``etas`` (all > Im z0).

    Returns ``(w, t)``, both of shape (len(xs), len(etas)): the endpoints
    ``xi + i eta`` and the Loewner times at which they are reached.
    """
    z0 = complex(z0)
    xs = np.asarray(xs, dtype=float)
    etas = np.sort(np.asarray(etas, dtype=float))
    if np.any((xs < -1) | (xs >= 1)):
        raise OutOfRange("exponents must lie in [-1, 1)")
    if not (z0.real > 0 and z0.imag > 0):
        raise ValueError("exponent driving needs Re z0 > 0 and Im z0 > 0")
    if np.any(etas <= z0.imag):
        raise ValueError("target heights must exceed Im z0")
    n = xs.size
    xi0 = np.full(n, z0.real)
    eta0 = np.full(n, z0.imag)
    breaks = np.tile(etas, (n, 1))
    y0 = np.column_stack([xi0, np.zeros(n)])
    res = dopri_batch(_eta_rhs(xs, xi0, eta0), eta0, y0, breaks, rel_tol=rel_tol)
    w = np.empty((n, etas.size), dtype=complex)
    tt = np.empty((n, etas.size))
    for i in range(n):
        pos = np.searchsorted(res.t[i], etas)
        w[i] = res.y[i][pos, 0] + 1j * etas
        tt[i] = res.y[i][pos, 1]
    return w, tt


def exponent_trajectory(driving, eta_end: float, rel_tol: float = DEFAULT_REL_TOL) -> Trajectory:
    """Trajectory of an exponent driving up to height ``eta_end``, integrated
    in ``eta`` and re-expressed in Loewner time."""
    if isinstance(driving, Slit):
        raise TypeError("x = -1 degenerates to U = 0; use integrate() with a time horizon")
    z0 = driving.z0
    xs = np.array([driving.x])
    xi0, eta0 = np.array([z0.real]), np.array([z0.imag])
    rhs = _eta_rhs(xs, xi0, eta0)
    res = dopri_batch(rhs, eta0, np.array([[z0.real, 0.0]]), np.array([[eta_end]]), rel_tol=rel_tol)
    eta = res.t[0]
    y = res.y[0]
    w = y[:, 0] + 1j * eta
    # dw/dt = (dxi/deta + i) / (dt/deta)
    fl, fr = res.f_left[0], res.f_right[0]
    dl = (fl[:, 0] + 1j) / fl[:, 1]
    dr = (fr[:, 0] + 1j) / fr[:, 1]
    return Trajectory(y[:, 1], w, driving, z0, dl, dr)


# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ThunderReport:
    """Worst-case margins of ``eta0/eta <= xi/xi0 < eta/eta0`` along a path.

    ``max_lower_violation`` is max(0, eta0/eta - xi/xi0); ``min_upper_slack``
    is the smallest eta/eta0 - xi/xi0 over samples with t > 0 and must stay
    strictly positive.
    """

    max_lower_violation: float
    min_upper_slack: float
    n_samples: int

    @property
    def upper_strict(self) -> bool:
        return self.min_upper_slack > 0


def thunder_check(traj: Trajectory) -> ThunderReport:
    z0 = traj.z0
    if not z0.real > 0:
        raise ValueError("the bounds need Re z0 > 0")
    xi0, eta0 = z0.real, z0.imag
    later = traj.t > traj.t[0]
    w = traj.w[later]
    if w.size == 0:
        return ThunderReport(0.0, math.inf, 0)
    ratio_xi = w.real / xi0
    ratio_eta = w.imag / eta0
    lower = np.maximum(0.0, 1.0 / ratio_eta - ratio_xi)
    upper = ratio_eta - ratio_xi
    return ThunderReport(float(lower.max()), float(upper.min()), int(w.size))

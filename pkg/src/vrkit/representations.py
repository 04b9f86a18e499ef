"""Integral representations used as independent oracles.

Bounded typically real maps with f'(0) = tau are

    f = (sqrt(g) - 1)/(sqrt(g) + 1),
    g(z) = sum_i lam_i s(x_i, y_i; z),
    s = (1+z)^2 (1 - 2(1 - 2tau + x + y) z + z^2) / ((1 - 2xz + z^2)(1 - 2yz + z^2))

with atoms (x, y) in the square B = {-1 <= x <= 2tau-1 <= y <= 1}.  Maps with
real coefficients are f = (g - 1)/(g + 1) with the symmetrised Herglotz
kernel g(z) = sum_i lam_i (1 - z^2)/(1 - 2z cos u_i + z^2), u_i in [0, pi];
here f'(0) = sum_i lam_i cos u_i.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import BranchCut, RejectionBudgetExceeded
from .geometry import branch_sqrt_path
from .loewner import DiscreteMeasure, MeasurePath, MeasurePiece

CONSTRAINTS = ("none", "nonneg", "zero")
REJECTION_BUDGET = 100_000
CONSTRAINT_TOL = 1e-12


def _rng(seed):
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


def _simplex(rng, n):
    return rng.dirichlet(np.ones(n))


# ---------------------------------------------------------------------------
# Szapiel representation

@dataclass(frozen=True)
class SzapielSpec:
    tau: float
    mu: DiscreteMeasure

    def __post_init__(self):
        if not 0 < self.tau <= 1:
            raise ValueError("tau must lie in (0, 1]")
        if self.mu.domain != "square" or self.mu.tau != self.tau:
            raise ValueError("the measure must live on the square B of the same tau")

    @classmethod
    def from_atoms(cls, tau, atoms, weights=None) -> "SzapielSpec":
        atoms = np.asarray(atoms, dtype=float).reshape(-1, 2)
        weights = np.ones(len(atoms)) if weights is None else weights
        return cls(float(tau), DiscreteMeasure.normalized(atoms, weights, domain="square", tau=float(tau)))

    def to_json(self) -> dict:
        return {"tau": self.tau,
                "atoms": [[x, y, lam] for (x, y), lam in zip(self.mu.positions, self.mu.weights)]}

    @classmethod
    def from_json(cls, data) -> "SzapielSpec":
        atoms = [(a[0], a[1]) for a in data["atoms"]]
        lam = [a[2] for a in data["atoms"]]
        tau = float(data["tau"])
        return cls(tau, DiscreteMeasure(tuple(atoms), tuple(lam), domain="square", tau=tau))


def szapiel_kernel(tau, x, y, z):
    """s(x, y; z), broadcasting over atoms and points."""
    zz = z * z
    return ((1 + z) ** 2 * (1 - 2 * (1 - 2 * tau + x + y) * z + zz)
            / ((1 - 2 * x * z + zz) * (1 - 2 * y * z + zz)))


def szapiel_g(spec: SzapielSpec, z):
    z = np.asarray(z, dtype=complex)
    pos = np.asarray(spec.mu.positions, dtype=float)
    lam = np.asarray(spec.mu.weights)
    zf = z.reshape(-1, 1)
    s = szapiel_kernel(spec.tau, pos[:, 0], pos[:, 1], zf)
    # sum lam_i (s_i - 1) + 1: g(0) = 1 holds exactly whatever the weight rounding
    g = 1 + ((s - 1) * lam).sum(axis=1)
    return g.reshape(z.shape)


def _sqrt_side_continued(g_of, z):
    """(sqrt(g) - 1)/(sqrt(g) + 1) with the branch continued from g(0) = 1."""
    g = np.asarray(g_of(z), dtype=complex)
    on_cut = (g.imag == 0) & (g.real <= 0)
    r = np.sqrt(g)
    if np.any(on_cut):
        flat_z = np.asarray(z, dtype=complex).reshape(-1)
        flat_r = r.reshape(-1)
        for k in np.flatnonzero(on_cut.reshape(-1)):
            path = np.linspace(0, 1, 257) * flat_z[k]
            try:
                flat_r[k] = branch_sqrt_path(g_of(path), 1.0)[-1]
            except ValueError as exc:
                raise BranchCut(f"g reaches the branch point near z = {flat_z[k]}") from exc
        r = flat_r.reshape(g.shape)
    return (r - 1) / (r + 1)


def szapiel_eval(spec: SzapielSpec, z):
    """f(z) for the Szapiel representation; vectorised over z."""
    z = np.asarray(z, dtype=complex)
    if np.any(np.abs(z) >= 1):
        raise ValueError("z must lie in the open unit disc")
    out = _sqrt_side_continued(lambda p: szapiel_g(spec, p), z)
    return complex(out) if out.ndim == 0 else out


# ---------------------------------------------------------------------------
# symmetrised Herglotz representation

@dataclass(frozen=True)
class HerglotzSpec:
    mu: DiscreteMeasure
    constraint: str = "none"

    def __post_init__(self):
        if self.constraint not in CONSTRAINTS:
            raise ValueError(f"constraint must be one of {CONSTRAINTS}")
        if self.mu.domain != "interval":
            raise ValueError("Herglotz measures live on [0, pi]")
        m = self.m1
        if self.constraint == "nonneg" and m < -CONSTRAINT_TOL:
            raise ValueError(f"first moment {m:g} < 0 violates the nonneg constraint")
        if self.constraint == "zero" and abs(m) > CONSTRAINT_TOL:
            raise ValueError(f"first moment {m:g} != 0 violates the zero constraint")

    @property
    def m1(self) -> float:
        return float(np.dot(np.cos(self.mu.positions), self.mu.weights))

    @classmethod
    def from_atoms(cls, angles, weights=None, constraint="none") -> "HerglotzSpec":
        angles = np.asarray(angles, dtype=float).ravel()
        weights = np.ones(angles.size) if weights is None else weights
        return cls(DiscreteMeasure.normalized(angles, weights, domain="interval"), constraint)

    def to_json(self) -> dict:
        return {"constraint": self.constraint,
                "atoms": [[u, lam] for u, lam in zip(self.mu.positions, self.mu.weights)]}

    @classmethod
    def from_json(cls, data) -> "HerglotzSpec":
        u = tuple(a[0] for a in data["atoms"])
        lam = tuple(a[1] for a in data["atoms"])
        return cls(DiscreteMeasure(u, lam, domain="interval"), data.get("constraint", "none"))


def herglotz_eval(spec: HerglotzSpec, z):
    """(g(z), f(z)); vectorised over z."""
    z = np.asarray(z, dtype=complex)
    if np.any(np.abs(z) >= 1):
        raise ValueError("z must lie in the open unit disc")
    c = np.cos(np.asarray(spec.mu.positions))
    lam = np.asarray(spec.mu.weights)
    zf = z.reshape(-1, 1)
    zz = zf * zf
    k = (1 - zz) / (1 - 2 * zf * c + zz)
    g = (1 + ((k - 1) * lam).sum(axis=1)).reshape(z.shape)
    f = (g - 1) / (g + 1)
    if g.ndim == 0:
        return complex(g), complex(f)
    return g, f


# ---------------------------------------------------------------------------
# the non-univalent witness

def f0(z):
    """tau = 1/2, mu = point mass at (-1/2, 1/2)."""
    spec = SzapielSpec.from_atoms(0.5, [(-0.5, 0.5)])
    return szapiel_eval(spec, z)


def f0_closed_form(z):
    z = np.asarray(z, dtype=complex)
    g = (1 + z) ** 2 * (1 + z ** 2) / (1 + z ** 2 + z ** 4)
    r = np.sqrt(g)
    return (r - 1) / (r + 1)


def f0_critical_point() -> complex:
    return complex(-0.25 + 1j * math.sqrt(3) / 4 + 0.5 * np.sqrt(complex(-4.5, -math.sqrt(3) / 2)))


def richardson_derivative(f, z, h: float = 1e-3):
    """f'(z) from central differences at h and h/2, Richardson-extrapolated."""
    z = np.asarray(z, dtype=complex)

    def central(step):
        return (np.asarray(f(z + step)) - np.asarray(f(z - step))) / (2 * step)

    d1, d2 = central(h), central(h / 2)
    out = (4 * d2 - d1) / 3
    return complex(out) if np.ndim(out) == 0 else out


@dataclass(frozen=True)
class F0Report:
    z_star: complex
    abs_z_star: float
    abs_derivative_at_z_star: float
    derivative_at_0: complex
    passed: bool

    def to_json(self) -> dict:
        return {"z_star": [self.z_star.real, self.z_star.imag], "abs_z_star": self.abs_z_star,
                "abs_derivative_at_z_star": self.abs_derivative_at_z_star,
                "derivative_at_0": [self.derivative_at_0.real, self.derivative_at_0.imag],
                "passed": self.passed}


def f0_critical_check() -> F0Report:
    zs = f0_critical_point()
    d_star = abs(richardson_derivative(f0, zs))
    d0 = richardson_derivative(f0, 0.0)
    ok = abs(zs) < 1 and d_star < 1e-6 and abs(d0 - 0.5) < 1e-8
    return F0Report(zs, abs(zs), d_star, d0, bool(ok))


# ---------------------------------------------------------------------------
# samplers

def _draw_tau(rng, tau_dist):
    if tau_dist is None or tau_dist == "uniform":
        # (0, 1]: 1 - U[0, 1)
        return float(1.0 - rng.random())
    if isinstance(tau_dist, (tuple, list)):
        lo, hi = tau_dist
        return float(rng.uniform(lo, hi))
    return float(tau_dist)


def sample_szapiel(tau_dist="uniform", n_atoms: int = 1, seed=None) -> SzapielSpec:
    """Atoms uniform on B, weights uniform on the simplex.

    ``tau_dist`` is a fixed tau, an interval (lo, hi) or "uniform" on (0, 1].
    """
    if n_atoms < 1:
        raise ValueError("n_atoms must be >= 1")
    rng = _rng(seed)
    tau = _draw_tau(rng, tau_dist)
    mid = 2 * tau - 1
    x = rng.uniform(-1.0, mid, n_atoms)
    y = rng.uniform(mid, 1.0, n_atoms)
    return SzapielSpec.from_atoms(tau, np.column_stack([x, y]), _simplex(rng, n_atoms))


def sample_herglotz(constraint: str = "none", n_atoms: int = 1, seed=None,
                    support=(0.0, math.pi)) -> HerglotzSpec:
    """Atoms uniform on ``support``, weights uniform on the simplex.

    "nonneg" rejects draws with negative first moment; "zero" mixes the draw
    with one compensating atom whose cosine has the opposite sign, so a
    single-atom draw yields the two-atom extreme measures.
    """
    if constraint not in CONSTRAINTS:
        raise ValueError(f"constraint must be one of {CONSTRAINTS}")
    if n_atoms < 1:
        raise ValueError("n_atoms must be >= 1")
    lo, hi = support
    if not 0 <= lo < hi <= math.pi:
        raise ValueError("support must be a subinterval of [0, pi]")
    rng = _rng(seed)
    rejected = 0
    while True:
        u = rng.uniform(lo, hi, n_atoms)
        lam = _simplex(rng, n_atoms)
        m = float(np.dot(np.cos(u), lam))
        if constraint == "none" or (constraint == "nonneg" and m >= 0):
            return HerglotzSpec.from_atoms(u, lam, constraint)
        if constraint == "zero":
            if m == 0:
                return HerglotzSpec.from_atoms(u, lam, constraint)
            # compensating atom on the other side of pi/2
            side = (math.pi / 2, math.pi) if m > 0 else (0.0, math.pi / 2)
            a, b = max(side[0], lo), min(side[1], hi)
            if a < b:
                phi = float(rng.uniform(a, b))
                c = math.cos(phi)
                if c * m < 0:
                    beta = m / (m - c)
                    spec = HerglotzSpec.from_atoms(np.append(u, phi), np.append((1 - beta) * lam, beta))
                    if abs(spec.m1) <= CONSTRAINT_TOL:
                        return HerglotzSpec(spec.mu, "zero")
        rejected += 1
        if rejected >= REJECTION_BUDGET:
            raise RejectionBudgetExceeded(f"{rejected} draws rejected for constraint {constraint!r}")


def zero_moment_pair(y: float) -> HerglotzSpec:
    """lam delta_0 + (1 - lam) delta_phi with cos(phi) = y in [-1, 0) and
    lam = y/(y - 1); its value at z0 traces the curve C."""
    if not -1 <= y < 0:
        raise ValueError("y must lie in [-1, 0)")
    lam = y / (y - 1)
    return HerglotzSpec.from_atoms([0.0, math.acos(y)], [lam, 1 - lam], "zero")


def sample_driving(pieces: int = 10, value_range=(0.0, 50.0), seed=None,
                   durations=(0.05, 0.5), max_atoms: int = 3) -> MeasurePath:
    """Piecewise-constant measure driving: each piece carries 1..max_atoms
    atoms uniform in ``value_range`` with simplex weights."""
    if pieces < 1:
        raise ValueError("pieces must be >= 1")
    lo, hi = value_range
    if not 0 <= lo <= hi:
        raise ValueError("driving values must be >= 0")
    rng = _rng(seed)
    out, t = [], 0.0
    for _ in range(pieces):
        dt = float(rng.uniform(*durations))
        k = int(rng.integers(1, max_atoms + 1))
        meas = DiscreteMeasure.normalized(rng.uniform(lo, hi, k), _simplex(rng, k), domain="halfline")
        out.append(MeasurePiece(t, t + dt, meas))
        t += dt
    return MeasurePath(tuple(out))

"""Monte-Carlo verification suites.

Every suite compares two independent routes to the same set: the Loewner
flow or an integral representation on one side, the closed-form region
classifiers on the other.  Samples are processed in fixed-size chunks whose
seeds are spawned from the run seed, so results do not depend on how many
workers run them.
"""

from __future__ import annotations

import cmath
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from . import disc, halfplane
from .geometry import square_side
from .io import driving_to_json
from .loewner import integrate_many, thunder_check
from .representations import (f0_critical_check, herglotz_eval, richardson_derivative,
                              sample_driving, sample_herglotz, sample_szapiel, szapiel_eval,
                              zero_moment_pair)

SUITES = ("hp-containment", "hp-inverse", "disc-szapiel", "disc-herglotz",
          "curve-identities", "nesting", "f0")
CHUNK = 500
MAX_RECORDED = 20
DISC_Z0 = 0.9 * cmath.exp(1j * math.pi / 4)
FIG5_Z0 = 1 / 3 + 0.5j


@dataclass
class VerifyReport:
    suite: str
    samples: int
    failures: list = field(default_factory=list)
    n_failures: int = 0
    max_violation: float = 0.0
    wall_time: float = 0.0
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.n_failures == 0

    def to_json(self) -> dict:
        d = asdict(self)
        d["passed"] = self.passed
        return d


def worker_count() -> int:
    cpus = os.cpu_count() or 1
    env = os.environ.get("VRKIT_THREADS")
    if env:
        try:
            return max(1, min(cpus, int(env)))
        except ValueError:
            pass
    return cpus


def _run_chunks(fn, n, seed, extra, workers=None):
    """Split ``n`` samples into chunks, run ``fn(seed_seq, size, *extra)`` on
    each and return the chunk results in order."""
    sizes = [min(CHUNK, n - lo) for lo in range(0, n, CHUNK)]
    seeds = np.random.SeedSequence(seed).spawn(len(sizes))
    tasks = [(s, k) + tuple(extra) for s, k in zip(seeds, sizes)]
    workers = worker_count() if workers is None else workers
    if workers <= 1 or len(tasks) <= 1:
        return [fn(*t) for t in tasks]
    with ProcessPoolExecutor(max_workers=min(workers, len(tasks))) as pool:
        return list(pool.map(fn, *zip(*tasks)))


def _pt(w):
    return [float(np.real(w)), float(np.imag(w))]


def _merge(suite, chunks, key, n):
    rep = VerifyReport(suite, n)
    for c in chunks:
        part = c[key]
        rep.n_failures += part["n_failures"]
        rep.max_violation = max(rep.max_violation, part["max_violation"])
        room = MAX_RECORDED - len(rep.failures)
        rep.failures.extend(part["failures"][:max(room, 0)])
        for k, v in part.get("details", {}).items():
            if k.startswith("min_"):
                rep.details[k] = min(rep.details.get(k, math.inf), v)
            elif k.startswith("max_"):
                rep.details[k] = max(rep.details.get(k, -math.inf), v)
            else:
                rep.details[k] = rep.details.get(k, 0) + v
    return rep


# ---------------------------------------------------------------------------
# half-plane suites

def _hp_chunk(seed_seq, size, z0, tol, n_dense):
    rng = np.random.default_rng(seed_seq)
    drivings = [sample_driving(10, (0.0, 50.0), rng) for _ in range(size)]
    trajs = integrate_many([z0] * size, drivings, [d.t_end for d in drivings])
    cont = {"n_failures": 0, "max_violation": 0.0, "failures": [],
            "details": {"min_upper_slack": math.inf, "max_lower_violation": 0.0, "steps": 0}}
    inv = {"n_failures": 0, "max_violation": 0.0, "failures": [], "details": {"pairs": 0}}
    xi0, eta0 = z0.real, z0.imag
    for d, tr in zip(drivings, trajs):
        w = tr.final
        member, where = halfplane.classify_VI_many(z0, [w], tol)
        viol = max(0.0, xi0 * eta0 / w.imag - w.real, w.real - xi0 * w.imag / eta0)
        rep = thunder_check(tr)
        monotone = bool(np.all(np.diff(tr.w.imag) > 0))
        cont["details"]["min_upper_slack"] = min(cont["details"]["min_upper_slack"], rep.min_upper_slack)
        cont["details"]["max_lower_violation"] = max(cont["details"]["max_lower_violation"],
                                                     rep.max_lower_violation)
        cont["details"]["steps"] += int(tr.t.size - 1)
        cont["max_violation"] = max(cont["max_violation"], viol)
        if not (member[0] and rep.upper_strict and monotone):
            cont["n_failures"] += 1
            if len(cont["failures"]) < MAX_RECORDED:
                cont["failures"].append({"input": driving_to_json(d), "value": _pt(w),
                                         "verdict": str(where[0]), "margin": -viol,
                                         "upper_slack": rep.min_upper_slack, "monotone": monotone})
        # inverse regions: every earlier point lies in V_I*(later point)
        _, ws = tr.resample(n_dense)
        j, i = np.triu_indices(ws.size)          # j <= i: s_j <= t_i
        m, wh = halfplane.classify_VIstar_many(ws[i], ws[j], tol)
        inv["details"]["pairs"] += int(m.size)
        if not m.all():
            bad = np.flatnonzero(~m)
            inv["n_failures"] += int(bad.size)
            k = bad[0]
            if len(inv["failures"]) < MAX_RECORDED:
                inv["failures"].append({"input": driving_to_json(d), "value": _pt(ws[j[k]]),
                                        "z0": _pt(ws[i[k]]), "verdict": str(wh[k]), "margin": 0.0})
    return {"hp-containment": cont, "hp-inverse": inv}


def run_hp(n=10_000, seed=0, z0=1 + 1j, tol=1e-7, n_dense=32, workers=None):
    """Both half-plane suites from one set of random trajectories."""
    z0 = complex(z0)
    if not (z0.real > 0 and z0.imag > 0):
        raise ValueError("the half-plane suites need Re z0 > 0 and Im z0 > 0")
    t0 = time.perf_counter()
    chunks = _run_chunks(_hp_chunk, n, seed, (z0, tol, n_dense), workers)
    wall = time.perf_counter() - t0
    out = {}
    for key in ("hp-containment", "hp-inverse"):
        rep = _merge(key, chunks, key, n)
        rep.wall_time = wall
        rep.details["z0"] = _pt(z0)
        out[key] = rep
    return out


# ---------------------------------------------------------------------------
# disc suites

def _szapiel_chunk(seed_seq, size, z0, tol, n_z):
    rng = np.random.default_rng(seed_seq)
    out = {"n_failures": 0, "max_violation": 0.0, "failures": [],
           "details": {"max_deriv_error": 0.0, "min_typical_real": math.inf, "max_abs_f": 0.0,
                       "max_symmetry_error": 0.0}}
    vu = disc.ArcClassifier(disc.vu_preimage(z0), z0, via_square=True, excluded_points=(0j,))
    r = np.sqrt(rng.random(n_z)) * 0.99
    zs = r * np.exp(2j * math.pi * rng.random(n_z))
    for _ in range(size):
        spec = sample_szapiel("uniform", int(rng.integers(1, 4)), rng)
        w = szapiel_eval(spec, z0)
        if spec.tau == 1:
            in_vt = abs(w - z0) <= tol
            sd_vt = -abs(w - z0)
        else:
            vt = disc.ArcClassifier(disc.vt_preimage(z0, spec.tau), z0, via_square=True)
            in_vt = bool(vt([w], tol)[0][0])
            sd_vt = float(vt.margins([w])[0][0])
        in_vu = bool(vu([w], tol)[0][0])
        sd_vu = float(vu.margins([w])[0][0])
        f_at_0 = szapiel_eval(spec, 0.0)
        deriv = abs(richardson_derivative(lambda z: szapiel_eval(spec, z), 0.0) - spec.tau)
        fz = szapiel_eval(spec, zs)
        typ = float((fz.imag * zs.imag).min())
        sym = float(np.abs(szapiel_eval(spec, np.conj(zs[:8])) - np.conj(fz[:8])).max())
        d = out["details"]
        d["max_deriv_error"] = max(d["max_deriv_error"], deriv)
        d["min_typical_real"] = min(d["min_typical_real"], typ)
        d["max_abs_f"] = max(d["max_abs_f"], float(np.abs(fz).max()))
        d["max_symmetry_error"] = max(d["max_symmetry_error"], sym)
        out["max_violation"] = max(out["max_violation"], -min(sd_vt, sd_vu, 0.0))
        ok = (in_vt and in_vu and f_at_0 == 0 and deriv < 1e-6 and typ >= -1e-10
              and np.abs(fz).max() < 1 and sym <= 1e-12)
        if not ok:
            out["n_failures"] += 1
            if len(out["failures"]) < MAX_RECORDED:
                out["failures"].append({"input": spec.to_json(), "value": _pt(w),
                                        "verdict": {"VT": in_vt, "VU": in_vu, "f0": _pt(f_at_0),
                                                    "deriv_error": deriv, "typical_real": typ},
                                        "margin": min(sd_vt, sd_vu)})
    return {"disc-szapiel": out}


def run_szapiel(n=10_000, seed=0, z0=DISC_Z0, tol=1e-7, n_z=200, workers=None) -> VerifyReport:
    z0 = disc._check_z0(z0)
    t0 = time.perf_counter()
    chunks = _run_chunks(_szapiel_chunk, n, seed, (z0, tol, n_z), workers)
    rep = _merge("disc-szapiel", chunks, "disc-szapiel", n)
    rep.wall_time = time.perf_counter() - t0
    rep.details["z0"] = _pt(z0)
    return rep


_HERGLOTZ_TARGET = {"none": "VR", "nonneg": "VRgeq", "zero": "VR0"}


def _herglotz_chunk(seed_seq, size, z0, tol, constraint):
    rng = np.random.default_rng(seed_seq)
    region = disc.disc_region(_HERGLOTZ_TARGET[constraint], z0, resolution=1e-3)
    clf = region.classifier
    out = {"n_failures": 0, "max_violation": 0.0, "failures": [],
           "details": {"min_re_g": math.inf, "max_symmetry_error": 0.0, "max_deriv_error": 0.0}}
    zs = 0.99 * np.sqrt(rng.random(64)) * np.exp(2j * math.pi * rng.random(64))
    specs = [sample_herglotz(constraint, int(rng.integers(1, 4)), rng) for _ in range(size)]
    ws = np.array([herglotz_eval(s, z0)[1] for s in specs])
    member, where = clf(ws, tol)
    sd, _ = clf.margins(ws)
    out["max_violation"] = float(max(0.0, -sd.min()))
    for s, w, m, wh, margin in zip(specs, ws, member, where, sd):
        g, f = herglotz_eval(s, zs)
        sym = float(np.abs(herglotz_eval(s, np.conj(zs[:8]))[1] - np.conj(f[:8])).max())
        deriv = abs(richardson_derivative(lambda z: herglotz_eval(s, z)[1], 0.0) - s.m1)
        d = out["details"]
        d["min_re_g"] = min(d["min_re_g"], float(g.real.min()))
        d["max_symmetry_error"] = max(d["max_symmetry_error"], sym)
        d["max_deriv_error"] = max(d["max_deriv_error"], deriv)
        g0 = herglotz_eval(s, 0.0)[0]
        if not (m and g0 == 1 and g.real.min() > 0 and sym <= 1e-12 and deriv < 1e-6):
            out["n_failures"] += 1
            if len(out["failures"]) < MAX_RECORDED:
                out["failures"].append({"input": s.to_json(), "value": _pt(w), "verdict": str(wh),
                                        "margin": float(margin)})
    return {"disc-herglotz": out}


def run_herglotz(n=10_000, seed=0, z0=FIG5_Z0, tol=1e-7, constraints=("none", "nonneg", "zero"),
                 n_curve=200, workers=None) -> VerifyReport:
    z0 = disc._check_z0(z0)
    t0 = time.perf_counter()
    rep = VerifyReport("disc-herglotz", 0)
    for k, c in enumerate(constraints):
        chunks = _run_chunks(_herglotz_chunk, n, (seed, k), (z0, tol, c), workers)
        part = _merge("disc-herglotz", chunks, "disc-herglotz", n)
        rep.samples += n
        rep.n_failures += part.n_failures
        rep.max_violation = max(rep.max_violation, part.max_violation)
        rep.failures.extend(part.failures[:MAX_RECORDED - len(rep.failures)])
        rep.details[c] = {"failures": part.n_failures, "max_violation": part.max_violation,
                          **part.details}
    if "zero" in constraints:
        # two-atom extreme measures with vanishing first moment trace the curve C
        r0 = disc.region_VR0(z0, resolution=1e-3).classifier
        worst = 0.0
        for y in np.linspace(-1.0, 0.0, n_curve + 1)[:-1]:
            w = herglotz_eval(zero_moment_pair(float(y)), z0)[1]
            off = abs(float(r0.margins([w])[0][0]))
            worst = max(worst, off)
            if off > 1e-8:
                rep.n_failures += 1
                if len(rep.failures) < MAX_RECORDED:
                    rep.failures.append({"input": zero_moment_pair(float(y)).to_json(), "value": _pt(w),
                                         "verdict": "off boundary of VR0", "margin": off})
        rep.samples += n_curve
        rep.details["curve_C_max_distance"] = worst
    rep.wall_time = time.perf_counter() - t0
    rep.details["z0"] = _pt(z0)
    return rep


def run_curve_identities(z0=DISC_Z0, n_t=200, n_tau=100) -> VerifyReport:
    z0 = disc._check_z0(z0)
    t0 = time.perf_counter()
    rep = VerifyReport("curve-identities", 0)
    ts = np.logspace(-4, math.log10(40.0), n_t)
    sig = np.exp(-ts)
    plus = disc.disc_curve_point("Cplus", z0, ts)
    minus = disc.disc_curve_point("Cminus", z0, ts)
    e_plus = float(np.abs(square_side(plus) - disc._P(z0, sig)).max())
    e_minus = float(np.abs(square_side(minus) - disc._Q(z0, sig)).max())
    koebe = max(float(np.abs(disc.extremal_map(1, float(t), z0) - p)) for t, p in zip(ts, plus))
    koebe = max(koebe, max(float(np.abs(disc.extremal_map(2, float(t), z0) - m)) for t, m in zip(ts, minus)))
    taus = np.linspace(0.01, 1.0, n_tau)
    arc = 0.0
    for tau in taus:
        tp = disc.tau_points(z0, tau)
        mid = 2 * tau - 1
        arc = max(arc, abs(disc.vt_arcs(z0, tau, "s1", mid) - tp.P), abs(disc.vt_arcs(z0, tau, "s2", mid) - tp.P),
                  abs(disc.vt_arcs(z0, tau, "s1", 1.0) - tp.Q), abs(disc.vt_arcs(z0, tau, "s2", -1.0) - tp.Q))
    tp1 = disc.tau_points(z0, 1.0)
    pq = abs(tp1.P - tp1.Q)
    collapse = disc.region_VT(z0, 1.0)
    collapse_ok = bool(collapse.classify(z0, 1e-10).member and not collapse.classify(z0 + 1e-9, 1e-10).member)
    checks = {"square_identity_plus": (e_plus, 1e-9), "square_identity_minus": (e_minus, 1e-9),
              "extremal_map": (koebe, 1e-10), "arc_endpoints": (arc, 1e-12), "P1_Q1": (pq, 1e-12)}
    for name, (val, bound) in checks.items():
        rep.details[name] = val
        rep.max_violation = max(rep.max_violation, val / bound)
        if not val < bound:
            rep.n_failures += 1
            rep.failures.append({"input": name, "value": val, "verdict": "exceeds bound", "margin": bound - val})
    rep.details["tau1_collapse"] = collapse_ok
    if not collapse_ok:
        rep.n_failures += 1
        rep.failures.append({"input": "tau=1", "value": _pt(z0), "verdict": "region is not {z0}", "margin": 0.0})
    rep.samples = 2 * n_t + 4 * n_tau + 2
    rep.wall_time = time.perf_counter() - t0
    rep.details["z0"] = _pt(z0)
    return rep


def nesting_grid(m: int = 64) -> np.ndarray:
    x = np.linspace(-1, 1, m + 2)[1:-1]
    g = (x[None, :] + 1j * x[:, None]).ravel()
    return g[np.abs(g) < 1]


def run_nesting(z0=FIG5_Z0, taus=(0.1, 0.5, 0.9), m=64, tol=1e-9) -> VerifyReport:
    z0 = disc._check_z0(z0)
    t0 = time.perf_counter()
    grid = nesting_grid(m)
    vu = disc.region_VU(z0, resolution=1e-3).classify_many(grid, tol)[0]
    vrgeq = disc.region_VRgeq(z0, resolution=1e-3).classify_many(grid, tol)[0]
    vr = disc.region_VR(z0, resolution=1e-3).classify_many(grid, tol)[0]
    rep = VerifyReport("nesting", 0)
    pairs = [("VRgeq", "VR", vrgeq, vr), ("VU", "VRgeq", vu, vrgeq)]
    for tau in taus:
        vt = disc.region_VT(z0, tau, resolution=1e-3).classify_many(grid, tol)[0]
        pairs += [(f"VT({tau})", "VU", vt, vu), (f"VT({tau})", "VRgeq", vt, vrgeq)]
        rep.details[f"VT({tau})_members"] = int(vt.sum())
    for inner, outer, a, b in pairs:
        bad = np.flatnonzero(a & ~b)
        rep.samples += grid.size
        rep.n_failures += int(bad.size)
        for k in bad[:MAX_RECORDED - len(rep.failures)]:
            rep.failures.append({"input": f"{inner} in {outer}", "value": _pt(grid[k]),
                                 "verdict": "not nested", "margin": 0.0})
    rep.details.update({"grid_points": int(grid.size), "VU_members": int(vu.sum()),
                        "VRgeq_members": int(vrgeq.sum()), "VR_members": int(vr.sum()), "z0": _pt(z0)})
    rep.wall_time = time.perf_counter() - t0
    return rep


def run_f0() -> VerifyReport:
    t0 = time.perf_counter()
    r = f0_critical_check()
    rep = VerifyReport("f0", 3, details=r.to_json())
    rep.max_violation = r.abs_derivative_at_z_star
    if not r.passed:
        rep.n_failures = 1
        rep.failures.append({"input": "f0", "value": _pt(r.z_star), "verdict": "witness failed",
                             "margin": r.abs_derivative_at_z_star})
    rep.wall_time = time.perf_counter() - t0
    return rep


def run_suite(name: str, n: int = 10_000, seed: int = 0, z0=None, tol: float = 1e-7,
              workers=None) -> VerifyReport:
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}; expected one of {SUITES}")
    if name in ("hp-containment", "hp-inverse"):
        return run_hp(n, seed, 1 + 1j if z0 is None else z0, tol, workers=workers)[name]
    if name == "disc-szapiel":
        return run_szapiel(n, seed, DISC_Z0 if z0 is None else z0, tol, workers=workers)
    if name == "disc-herglotz":
        return run_herglotz(n, seed, FIG5_Z0 if z0 is None else z0, tol, workers=workers)
    if name == "curve-identities":
        return run_curve_identities(DISC_Z0 if z0 is None else z0)
    if name == "nesting":
        return run_nesting(FIG5_Z0 if z0 is None else z0)
    return run_f0()

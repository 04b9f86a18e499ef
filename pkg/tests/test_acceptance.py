"""Acceptance criteria 1-12 at their stated sample counts and tolerances.

Each test prints one PASS/FAIL line; the lines are repeated in the pytest
terminal summary under "acceptance criteria".
"""

import cmath
import math
import time

import numpy as np

from vrkit import disc, halfplane
from vrkit.figures import FIGURES, count_paths, figure
from vrkit.geometry import polyline_distance, square_side
from vrkit.loewner import Slit, exponent_driving, exponent_endpoints, exponent_trajectory, integrate
from vrkit.verify import DISC_Z0, FIG5_Z0, run_f0, run_herglotz, run_hp, run_nesting, run_szapiel

N = 10_000
_HP = {}


def hp_reports():
    # criteria 2 and 3 share one set of 10^4 trajectories
    if not _HP:
        t0 = time.perf_counter()
        _HP.update(run_hp(N, seed=7, z0=1 + 1j, tol=1e-7))
        _HP["wall"] = time.perf_counter() - t0
    return _HP


def test_01_closed_form_ode_anchor(criterion):
    z0 = 1 + 1j
    t0 = time.perf_counter()
    err = 0.0
    for t in (0.1, 0.5, 1, 5, 10):
        exact = cmath.sqrt(z0 * z0 - 2 * t)
        exact = exact if exact.imag > 0 else -exact
        err = max(err, abs(integrate(z0, Slit.constant(0.0), t).final - exact))
    wall = time.perf_counter() - t0
    ok = err < 1e-8 and wall < 1
    assert criterion(1, "closed-form ODE anchor", ok, f"max err {err:.2e}, {wall:.3f} s")


def test_02_halfplane_containment(criterion):
    r = hp_reports()
    rep = r["hp-containment"]
    ok = rep.passed and rep.samples == N and r["wall"] < 60
    assert criterion(2, "half-plane containment", ok,
                     f"{rep.samples} drivings, {rep.n_failures} failures, "
                     f"min upper slack {rep.details['min_upper_slack']:.2e}, {r['wall']:.1f} s")


def test_03_inverse_region(criterion):
    rep = hp_reports()["hp-inverse"]
    ok = rep.passed and rep.details["pairs"] > 0
    assert criterion(3, "inverse-region property", ok,
                     f"{rep.details['pairs']} (s, t) pairs, {rep.n_failures} failures")


def test_04_boundary_attainment(criterion):
    z0 = 1 + 1j
    etas = np.linspace(1.05, 4.0, 40)
    dist = {}
    for x in (-1.0, -0.999):
        d = exponent_driving(x, z0)
        ends = np.array([exponent_trajectory(d, eta).final if x > -1 else
                         integrate(z0, d, (eta ** 2 - 1) / 2).final for eta in etas])
        # the horizontal gap to xi*eta = xi0*eta0 bounds the distance to C(z0)
        dist[x] = float(np.max(np.abs(ends.real - z0.real * z0.imag / ends.imag)))
    xs = np.linspace(-0.99, 0.99, 20)
    grid_eta = np.linspace(1.2, 6.0, 20)
    w, _ = exponent_endpoints(xs, z0, grid_eta)
    pred = z0.real * (grid_eta[None, :] / z0.imag) ** xs[:, None] + 1j * grid_eta[None, :]
    fill = float(np.max(np.abs(w - pred)))
    ok = dist[-1.0] < 1e-6 and dist[-0.999] < 5e-3 and fill < 1e-6
    assert criterion(4, "boundary attainment", ok,
                     f"x=-1 {dist[-1.0]:.1e}, x=-0.999 {dist[-0.999]:.1e}, fill {fill:.1e}")


def test_05_curve_square_identity(criterion):
    z0 = DISC_Z0
    t0 = time.perf_counter()
    ts = np.logspace(-4, math.log10(40.0), 200)
    plus = disc.disc_curve_point("Cplus", z0, ts)
    minus = disc.disc_curve_point("Cminus", z0, ts)
    err = 0.0
    for t, p, m in zip(ts, plus, minus):
        tp = disc.tau_points(z0, math.exp(-t))
        err = max(err, abs(square_side(p) - tp.P), abs(square_side(m) - tp.Q))
    wall = time.perf_counter() - t0
    ok = err < 1e-9 and wall < 1
    assert criterion(5, "curve square-side identity", ok, f"sup err {err:.2e}, {wall:.3f} s")


def test_06_arc_endpoint_algebra(criterion):
    z0 = DISC_Z0
    err = 0.0
    for tau in np.linspace(0.01, 1.0, 100):
        tp = disc.tau_points(z0, tau)
        mid = 2 * tau - 1
        err = max(err, abs(disc.vt_arcs(z0, tau, "s1", mid) - tp.P), abs(disc.vt_arcs(z0, tau, "s2", mid) - tp.P),
                  abs(disc.vt_arcs(z0, tau, "s1", 1.0) - tp.Q), abs(disc.vt_arcs(z0, tau, "s2", -1.0) - tp.Q))
    tp1 = disc.tau_points(z0, 1.0)
    pq = abs(tp1.P - tp1.Q)
    r = disc.region_VT(z0, 1.0)
    ring = z0 + 2e-10 * np.exp(2j * np.pi * np.arange(16) / 16)
    collapse = r.classify(z0, 1e-10).member and not r.contains(ring, 1e-10).any() and not r.pieces
    ok = err < 1e-12 and pq < 1e-12 and collapse
    assert criterion(6, "arc-endpoint algebra", ok,
                     f"endpoint err {err:.1e}, |P(1)-Q(1)| {pq:.1e}, collapse {collapse}")


def test_07_szapiel_containment(criterion):
    rep = run_szapiel(N, seed=0, z0=DISC_Z0, tol=1e-7)
    d = rep.details
    ok = rep.passed and rep.samples == N and rep.wall_time < 120
    assert criterion(7, "Szapiel containment", ok,
                     f"{rep.samples} specs, {rep.n_failures} failures, deriv err {d['max_deriv_error']:.1e}, "
                     f"{rep.wall_time:.1f} s")


def test_08_herglotz_containment(criterion):
    rep = run_herglotz(N, seed=0, z0=FIG5_Z0, tol=1e-7)
    ok = rep.passed and rep.details["curve_C_max_distance"] < 1e-8
    assert criterion(8, "Herglotz containment", ok,
                     f"{rep.samples} samples, {rep.n_failures} failures, "
                     f"curve C off-boundary {rep.details['curve_C_max_distance']:.1e}")


def test_09_f0_witness(criterion):
    rep = run_f0()
    d = rep.details
    ok = rep.passed and d["abs_z_star"] < 1 and d["abs_derivative_at_z_star"] < 1e-6 \
        and abs(complex(*d["derivative_at_0"]) - 0.5) < 1e-8
    assert criterion(9, "f0 witness", ok,
                     f"|z*| {d['abs_z_star']:.4f}, |f0'(z*)| {d['abs_derivative_at_z_star']:.1e}")


def test_10_region_nesting(criterion):
    rep = run_nesting(FIG5_Z0, taus=(0.1, 0.5, 0.9), m=64)
    ok = rep.passed and rep.details["grid_points"] > 0
    assert criterion(10, "region nesting", ok,
                     f"{rep.details['grid_points']} grid points, {rep.n_failures} violations")


def _cross_regions():
    hp = 1 + 1j
    yield "VI", halfplane.region_VI(hp, eta_max=8), (-6, 6, 1e-3, 7.9)
    yield "VIstar", halfplane.region_VIstar(hp, xi_max=6), (-5.9, 5.9, 1e-3, 3)
    for z0 in (DISC_Z0, FIG5_Z0):
        for tau in (0.1, 0.5, 0.9):
            yield f"VT({tau})", disc.region_VT(z0, tau), None
        for kind in ("VU", "VR", "VRgeq", "VRgt", "VR0"):
            yield kind, disc.disc_region(kind, z0), None


def test_11_classifier_cross_validation(criterion):
    rng = np.random.default_rng(11)
    tol = 1e-6
    bad, n_regions, checked = [], 0, 0
    for name, region, box in _cross_regions():
        if box is None:
            w = np.sqrt(rng.random(N)) * np.exp(2j * np.pi * rng.random(N))
        else:
            w = rng.uniform(box[0], box[1], N) + 1j * rng.uniform(box[2], box[3], N)
        poly, _ = region.boundary_polyline()
        far = polyline_distance(poly, w) > tol
        a = region.classify_many(w[far], tol)[0]
        b = region.winding_classify_many(w[far], tol)[0]
        n_regions += 1
        checked += int(far.sum())
        if not np.array_equal(a, b):
            bad.append((name, region.z0, int((a != b).sum())))
    ok = not bad
    assert criterion(11, "classifier cross-validation", ok,
                     f"{n_regions} regions, {checked} points, disagreements {bad or 0}")


def test_12_figures(criterion):
    counts = {}
    for name in FIGURES:
        svg = figure(name).render()
        counts[name] = (count_paths(svg, "boundary"), count_paths(svg, "region"))
    ok = counts["fig1"][0] == 4 and counts["fig4"][0] == 6 and counts["fig5"][1] == 3 \
        and all(c[0] + c[1] > 0 for c in counts.values())
    assert criterion(12, "figures", ok,
                     f"fig1 {counts['fig1'][0]} curves, fig4 {counts['fig4'][0]} arcs, "
                     f"fig5 {counts['fig5'][1]} regions")

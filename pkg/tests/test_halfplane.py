import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vrkit.errors import OutOfDomain
from vrkit.geometry import polyline_distance
from vrkit.halfplane import (classify_VI, classify_VI_many, classify_VIstar, classify_VIstar_many,
                             hp_curve_point, region_VI, region_VIstar)
from vrkit.loewner import integrate
from vrkit.regions import Where
from vrkit.representations import sample_driving

pos = st.floats(0.05, 5)
upper = st.builds(complex, st.floats(-5, 5), pos)


def test_curve_points():
    c = hp_curve_point("C", 1 + 1j, 1.0)
    assert abs(c - (0.643594 + 1.553774j)) < 1e-6 and abs(c.real * c.imag - 1) < 1e-12
    assert abs(hp_curve_point("D", 1 + 1j, math.sqrt(2)) - (2 + 2j)) < 1e-12
    assert hp_curve_point("Cstar", 1 + 1j, 0.0) == 1 + 1j
    with pytest.raises(OutOfDomain):
        hp_curve_point("Dstar", 1 + 1j, math.sqrt(2))


@settings(max_examples=200, deadline=None)
@given(pos, pos, st.floats(0, 1e3))
def test_hyperbola_identity(xi0, eta0, t):
    z0 = complex(xi0, eta0)
    for kind in ("C", "Cstar"):
        w = hp_curve_point(kind, z0, t)
        assert w.imag > 0 and w.real >= 0
        assert abs(w.real * w.imag - xi0 * eta0) <= 1e-12 * abs(z0) ** 2 * max(1.0, t / abs(z0) ** 2)
    d = hp_curve_point("D", z0, t)
    assert abs(((d - z0) * z0.conjugate()).imag) <= 1e-12 * abs(z0) * (abs(z0) + t)


def test_vi_examples():
    z0 = 1 + 1j
    v = classify_VI(z0, 1 + 2j)
    assert v.member and v.where == Where.INTERIOR
    v = classify_VI(z0, z0)
    assert v.member and v.where == Where.AT_Z0
    v = classify_VI(z0, 2 + 2j)
    assert not v.member and v.where == Where.ON_D_EXCLUDED
    v = classify_VI(z0, 0.5 + 2j)
    assert v.member and v.where == Where.ON_C
    assert not classify_VI(z0, 3 + 1.5j).member
    assert not classify_VI(z0, 0.5 + 0.5j).member


def test_vistar_examples():
    z0 = 1 + 1j
    v = classify_VIstar(z0, 2 + 0.5j)
    assert v.member and v.where == Where.ON_C
    v = classify_VIstar(z0, 0.5 + 0.5j)
    assert not v.member and v.where == Where.ON_D_EXCLUDED
    v = classify_VIstar(z0, z0)
    assert v.member and v.where == Where.AT_Z0
    assert classify_VIstar(z0, 1.5 + 0.5j).member
    assert not classify_VIstar(z0, 3.0).member      # real axis excluded


def test_imaginary_z0_degenerates():
    z0 = 2j
    assert classify_VI(z0, 5j).member
    assert classify_VI(z0, z0).member
    assert not classify_VI(z0, 1j).member
    assert not classify_VI(z0, 0.1 + 5j).member
    assert classify_VIstar(z0, 1j).member
    assert not classify_VIstar(z0, 3j).member
    assert not classify_VIstar(z0, 0j).member


def inequality_oracle(z0, w):
    """Literal reading of the membership inequalities, no tolerances."""
    if z0.real < 0:
        z0, w = -z0.conjugate(), -w.conjugate()
    xi0, eta0, xi, eta = z0.real, z0.imag, w.real, w.imag
    return w == z0 or (eta > 0 and xi0 * eta0 / eta <= xi < xi0 * eta / eta0)


@settings(max_examples=500, deadline=None)
@given(upper, upper)
def test_vi_matches_inequalities_away_from_boundary(z0, w):
    if abs(z0.real) < 1e-3:
        return
    zr, wr = (z0, w) if z0.real > 0 else (-z0.conjugate(), -w.conjugate())
    slack = min(abs(wr.real - zr.real * zr.imag / wr.imag), abs(zr.real * wr.imag / zr.imag - wr.real))
    if slack < 1e-6:
        return
    assert classify_VI(z0, w, 1e-9).member == inequality_oracle(z0, w)


@settings(max_examples=300, deadline=None)
@given(upper, upper)
def test_reflection_equivariance(z0, w):
    a = classify_VI(z0, w)
    b = classify_VI(-z0.conjugate(), -w.conjugate())
    assert a == b
    assert classify_VIstar(z0, w) == classify_VIstar(-z0.conjugate(), -w.conjugate())


@settings(max_examples=300, deadline=None)
@given(upper, upper)
def test_forward_and_inverse_regions_are_dual(z0, w):
    # w in V_I(z0)  <=>  z0 in V_I*(w)   (for points off the boundary curves)
    if abs(z0.real) < 1e-3 or abs(w - z0) < 1e-6:
        return
    zr, wr = (z0, w) if z0.real > 0 else (-z0.conjugate(), -w.conjugate())
    m = [abs(wr.real * wr.imag - zr.real * zr.imag), abs(wr.real * zr.imag - zr.real * wr.imag)]
    if min(m) < 1e-6:
        return
    assert classify_VI(z0, w).member == classify_VIstar(w, z0).member


def test_vectorised_per_point_z0():
    m, where = classify_VI_many([1 + 1j, -1 + 1j], [1 + 2j, -1 + 2j])
    assert list(m) == [True, True] and list(where) == ["interior", "interior"]
    m, _ = classify_VIstar_many([1 + 1j, 2j], [1.5 + 0.5j, 1j])
    assert list(m) == [True, True]


def test_trajectories_stay_in_regions():
    z0 = 1 + 1j
    for seed in range(25):
        d = sample_driving(10, (0.0, 50.0), seed=seed)
        tr = integrate(z0, d, d.t_end)
        assert classify_VI_many(z0, tr.w, 1e-7)[0].all()
        _, ws = tr.resample(24)
        j, i = np.triu_indices(ws.size)
        assert classify_VIstar_many(ws[i], ws[j], 1e-7)[0].all()


# exported regions

def test_region_vi_pieces_and_flags():
    r = region_VI(1 + 1j)
    names = [p.name for p in r.pieces]
    assert names == ["C", "truncation", "D"]
    assert [p.included for p in r.pieces] == [True, True, False]
    assert r.params["eta_max"] == 50
    c = r.pieces[0].vertices
    assert np.max(np.abs(c.real * c.imag - 1)) < 1e-9
    r0 = region_VI(1j)
    assert len(r0.pieces) == 1 and not r0.closed


def test_region_vistar_pieces_and_flags():
    r = region_VIstar(1 + 1j)
    assert [p.name for p in r.pieces] == ["Dstar", "Cstar", "truncation", "axis"]
    assert [p.included for p in r.pieces] == [False, True, True, False]


@pytest.mark.parametrize("z0", [1 + 1j, 0.3 + 2j, -1.5 + 0.7j])
def test_winding_agrees_with_analytic_classifier(z0):
    rng = np.random.default_rng(5)
    for region, box in ((region_VI(z0, eta_max=8), (-6, 6, 0.01, 7.9)),
                        (region_VIstar(z0, xi_max=6), (-5.9, 5.9, 0.001, 3))):
        w = rng.uniform(box[0], box[1], 1000) + 1j * rng.uniform(box[2], box[3], 1000)
        poly, _ = region.boundary_polyline()
        far = polyline_distance(poly, w) > 1e-6
        a = region.classify_many(w[far], 1e-9)[0]
        b = region.winding_classify_many(w[far], 1e-9)[0]
        assert np.array_equal(a, b)

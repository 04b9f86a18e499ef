import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vrkit.errors import RejectionBudgetExceeded
from vrkit.representations import (HerglotzSpec, SzapielSpec, f0, f0_closed_form, f0_critical_check,
                                   f0_critical_point, herglotz_eval, richardson_derivative,
                                   sample_herglotz, sample_szapiel, szapiel_eval, zero_moment_pair)

Z = np.array([0.3 + 0.4j, -0.5 + 0.1j, 0.7j, 0.2 - 0.6j, -0.8, 0.9 * np.exp(0.25j * np.pi)])


def disc_points(rng, n, r_max=0.99):
    return np.sqrt(rng.uniform(0, r_max ** 2, n)) * np.exp(2j * np.pi * rng.uniform(0, 1, n))


# Szapiel representation

def test_tau_one_is_the_identity():
    # y is forced to 1, so s = (1+z)^2/(1-z)^2 for every x
    for x in (-1.0, 0.0, 0.7):
        spec = SzapielSpec.from_atoms(1.0, [(x, 1.0)])
        assert np.max(np.abs(szapiel_eval(spec, Z) - Z)) < 1e-14


def test_f0_matches_closed_form():
    assert np.max(np.abs(f0(Z) - f0_closed_form(Z))) < 1e-14
    assert f0(0.0) == 0


def test_spec_validation():
    with pytest.raises(ValueError):
        SzapielSpec.from_atoms(0.5, [(0.5, 0.8)])       # x > 2tau - 1
    with pytest.raises(ValueError):
        SzapielSpec.from_atoms(0.0, [(-1.0, 1.0)])
    with pytest.raises(ValueError):
        szapiel_eval(SzapielSpec.from_atoms(0.5, [(0, 0)]), 1.0)


def test_boundary_degenerate_atom():
    # x = 2tau - 1 = y collapses s to (1+z)^2/((1+z)^2 - 4 tau z)
    tau = 0.3
    spec = SzapielSpec.from_atoms(tau, [(2 * tau - 1, 2 * tau - 1)])
    s = (1 + Z) ** 2 / ((1 + Z) ** 2 - 4 * tau * Z)
    r = np.sqrt(s)
    assert np.max(np.abs(szapiel_eval(spec, Z) - (r - 1) / (r + 1))) < 1e-14


def test_derivative_at_zero_is_tau():
    rng = np.random.default_rng(0)
    for _ in range(100):
        spec = sample_szapiel("uniform", int(rng.integers(1, 5)), rng)
        assert abs(richardson_derivative(lambda z: szapiel_eval(spec, z), 0.0) - spec.tau) < 1e-6


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2 ** 32 - 1), st.integers(1, 4))
def test_szapiel_typical_real_bounded_symmetric(seed, k):
    rng = np.random.default_rng(seed)
    spec = sample_szapiel("uniform", k, rng)
    z = disc_points(rng, 200)
    f = szapiel_eval(spec, z)
    assert szapiel_eval(spec, 0.0) == 0
    assert np.all(f.imag * z.imag >= -1e-10)
    assert np.all(np.abs(f) < 1)
    assert np.max(np.abs(szapiel_eval(spec, np.conj(z)) - np.conj(f))) <= 1e-12


def test_szapiel_json_roundtrip():
    spec = sample_szapiel(0.4, 3, 5)
    back = SzapielSpec.from_json(spec.to_json())
    assert back == spec
    assert np.array_equal(szapiel_eval(back, Z), szapiel_eval(spec, Z))


# Herglotz representation

@pytest.mark.parametrize("angles, weights, expect", [
    ([0.0], None, lambda z: z),
    ([math.pi / 2], None, lambda z: -z ** 2),
    ([0.0, math.pi], [0.5, 0.5], lambda z: z ** 2),
])
def test_herglotz_point_masses(angles, weights, expect):
    g, f = herglotz_eval(HerglotzSpec.from_atoms(angles, weights), Z)
    assert np.max(np.abs(f - expect(Z))) < 1e-14
    assert np.max(np.abs(g - (1 + f) / (1 - f))) < 1e-12


def test_herglotz_constraint_validation():
    with pytest.raises(ValueError):
        HerglotzSpec.from_atoms([math.pi], constraint="nonneg")
    with pytest.raises(ValueError):
        HerglotzSpec.from_atoms([0.0], constraint="zero")
    HerglotzSpec.from_atoms([0.0, math.pi], [0.5, 0.5], "zero")


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2 ** 32 - 1), st.sampled_from(["none", "nonneg", "zero"]), st.integers(1, 4))
def test_herglotz_caratheodory_and_moment(seed, constraint, k):
    rng = np.random.default_rng(seed)
    spec = sample_herglotz(constraint, k, rng)
    z = disc_points(rng, 200)
    g, f = herglotz_eval(spec, z)
    assert herglotz_eval(spec, 0.0)[0] == 1
    assert np.all(g.real > 0)
    assert np.all(np.abs(f) < 1)
    assert np.max(np.abs(herglotz_eval(spec, np.conj(z))[1] - np.conj(f))) <= 1e-12
    d = richardson_derivative(lambda p: herglotz_eval(spec, p)[1], 0.0)
    assert abs(d - spec.m1) < 1e-8


def test_herglotz_json_roundtrip():
    spec = sample_herglotz("zero", 3, 9)
    assert HerglotzSpec.from_json(spec.to_json()) == spec


def test_zero_moment_pair():
    for y in (-1.0, -0.5, -0.01):
        spec = zero_moment_pair(y)
        assert abs(spec.m1) < 1e-15
    # y = -1 is the half/half pair giving z^2
    assert np.max(np.abs(herglotz_eval(zero_moment_pair(-1.0), Z)[1] - Z ** 2)) < 1e-14
    with pytest.raises(ValueError):
        zero_moment_pair(0.0)


# samplers

@pytest.mark.parametrize("constraint", ["none", "nonneg", "zero"])
def test_sampler_weights_and_determinism(constraint):
    for seed in range(20):
        a = sample_herglotz(constraint, 4, seed)
        assert abs(sum(a.mu.weights) - 1) < 1e-12
        assert all(0 <= u <= math.pi for u in a.mu.positions)
    assert sample_herglotz(constraint, 3, 42).to_json() == sample_herglotz(constraint, 3, 42).to_json()


def test_szapiel_sampler_weights_domain_and_determinism():
    for seed in range(20):
        s = sample_szapiel((0.2, 0.8), 5, seed)
        assert abs(sum(s.mu.weights) - 1) < 1e-12
        mid = 2 * s.tau - 1
        assert all(-1 <= x <= mid <= y <= 1 for x, y in s.mu.positions)
    assert sample_szapiel("uniform", 3, 42).to_json() == sample_szapiel("uniform", 3, 42).to_json()


def test_nonneg_single_atom_on_first_quadrant_never_rejects():
    for seed in range(50):
        s = sample_herglotz("nonneg", 1, seed, support=(0.0, math.pi / 2))
        assert len(s.mu.positions) == 1 and s.m1 >= 0


def test_zero_constraint_moment_is_tight():
    for seed in range(200):
        s = sample_herglotz("zero", 3, seed)
        assert abs(s.m1) <= 1e-12


def test_zero_constraint_impossible_support_exhausts_budget():
    with pytest.raises(RejectionBudgetExceeded):
        sample_herglotz("zero", 1, 0, support=(0.0, 1.0))


def test_sampler_argument_checks():
    with pytest.raises(ValueError):
        sample_herglotz("bogus")
    with pytest.raises(ValueError):
        sample_szapiel(n_atoms=0)


# the non-univalent witness

def test_f0_critical_point():
    zs = f0_critical_point()
    assert abs(zs) < 1
    # independent check: the closed form's derivative vanishes there
    h = 1e-4
    d = (f0_closed_form(zs + h) - f0_closed_form(zs - h)) / (2 * h)
    assert abs(d) < 1e-6
    rep = f0_critical_check()
    assert rep.passed and rep.abs_derivative_at_z_star < 1e-6
    assert abs(rep.derivative_at_0 - 0.5) < 1e-8

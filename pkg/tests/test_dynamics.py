import cmath
import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cstates import (
    StateLabel,
    coefficients,
    evolve_coefficients,
    evolve_label,
    kinematic_representation_check,
    moments_from_state,
    temporal_stability_residual,
)
from cstates.phase import phase_factor, reduce_angles


def test_evolve_label_examples():
    assert evolve_label(StateLabel(0.5, 0.0), 2.0, 1.0) == StateLabel(0.5, 2.0)
    l = StateLabel(0.3, 1.1)
    assert evolve_label(l, 0.0, 2.0) == l
    forward = evolve_label(l, 2.0, 1.0)
    assert evolve_label(forward, -2.0, 1.0) == l


def test_evolve_coefficients_identity_at_t0(hydrogen, w_hydrogen):
    x = coefficients(hydrogen, w_hydrogen, StateLabel(0.4, 0.9))
    ev = evolve_coefficients(x, hydrogen, 0.0)
    assert np.array_equal(ev.c, x.c)
    assert ev.source_label == x.label


def test_eigenstate_gets_pure_phase(hydrogen):
    psi = np.zeros(5, dtype=complex)
    psi[2] = 1.0
    t = 1.9
    ev = evolve_coefficients(psi, hydrogen, t)
    np.testing.assert_allclose(np.abs(ev.c) ** 2, np.abs(psi) ** 2, atol=1e-15)
    expected = cmath.exp(-1j * hydrogen.energy(2) * t)
    assert ev.c[2] == pytest.approx(expected, abs=1e-14)


def test_evolved_equals_relabeled_componentwise(hydrogen, w_hydrogen):
    label = StateLabel(0.5, 0.3)
    t = 2.2
    ev = evolve_coefficients(coefficients(hydrogen, w_hydrogen, label), hydrogen, t)
    re = coefficients(hydrogen, w_hydrogen, evolve_label(label, t, hydrogen.omega))
    assert len(ev.c) == len(re.c)
    np.testing.assert_allclose(ev.c, re.c, atol=1e-12)


def test_residual_examples(hydrogen, w_hydrogen, harmonic, w_harmonic):
    assert temporal_stability_residual(hydrogen, w_hydrogen, StateLabel(0.5, 0.0), 3.7) <= 1e-10
    assert temporal_stability_residual(harmonic, w_harmonic, StateLabel(2.0, 1.0), math.pi) <= 1e-10
    assert temporal_stability_residual(hydrogen, w_hydrogen, StateLabel(0.3, -1.0), 0.0) == 0.0


def test_energy_conserved_under_evolution(hydrogen, w_hydrogen):
    label = StateLabel(0.62, 0.0)
    x = coefficients(hydrogen, w_hydrogen, label)
    for t in (0.0, 3.3, -11.0):
        ev = evolve_coefficients(x, hydrogen, t)
        mean, _, _ = moments_from_state(
            hydrogen, type(x)(c=ev.c, tail_mass_bound=x.tail_mass_bound,
                              label=label, spectrum=hydrogen)
        )
        assert mean == pytest.approx(hydrogen.omega * label.J, abs=1e-10)


def test_kinematics_coherent_at_t0(hydrogen, w_hydrogen):
    label = StateLabel(0.45, 0.8)
    psi = coefficients(hydrogen, w_hydrogen, label).c
    lhs, rhs = kinematic_representation_check(hydrogen, w_hydrogen, psi, label, 0.0)
    assert lhs == pytest.approx(rhs, abs=1e-14)
    assert lhs == pytest.approx(1.0, abs=1e-10)


def test_kinematics_random_state(hydrogen, w_hydrogen):
    rng = np.random.default_rng(7)
    psi = rng.normal(size=10) + 1j * rng.normal(size=10)
    psi /= np.linalg.norm(psi)
    lhs, rhs = kinematic_representation_check(
        hydrogen, w_hydrogen, psi, StateLabel(0.4, 0.2), 1.3
    )
    assert abs(lhs - rhs) <= 1e-10


def test_kinematics_single_eigenstate(hydrogen, w_hydrogen):
    label = StateLabel(0.4, 0.2)
    t = 0.9
    psi = np.zeros(3, dtype=complex)
    psi[2] = 1.0
    lhs, rhs = kinematic_representation_check(hydrogen, w_hydrogen, psi, label, t)
    c2 = coefficients(hydrogen, w_hydrogen, label).c[2]
    expected = c2.conjugate() * cmath.exp(-1j * hydrogen.energy(2) * t)
    assert lhs == pytest.approx(expected, abs=1e-12)
    assert rhs == pytest.approx(expected, abs=1e-12)


def test_reduce_angles_against_mpmath():
    values = np.array([3.0, -2.0, 1.0e9, -7.3e11, 5.5e14])
    reduced = reduce_angles(values)
    with mpmath.workdps(50):
        tau = 2 * mpmath.pi
        for x, r in zip(values, reduced):
            ref = mpmath.fmod(mpmath.mpf(float(x)), tau)
            diff = complex(mpmath.exp(-1j * ref)) - complex(cmath.exp(-1j * float(r)))
            assert abs(diff) < 1e-12


@settings(max_examples=40, deadline=None)
@given(x=st.floats(min_value=1e8, max_value=1e15))
def test_phase_factor_accuracy_property(x):
    got = phase_factor(np.asarray([x]))[0]
    with mpmath.workdps(50):
        ref = mpmath.exp(-1j * mpmath.fmod(mpmath.mpf(x), 2 * mpmath.pi))
        assert abs(complex(ref) - got) < 1e-12


@settings(max_examples=40, deadline=None)
@given(
    t=st.floats(min_value=-1e6, max_value=1e6),
    seed=st.integers(min_value=0, max_value=2**31),
)
def test_norm_preserved_property(t, seed, hydrogen):
    rng = np.random.default_rng(seed)
    psi = rng.normal(size=16) + 1j * rng.normal(size=16)
    psi /= np.linalg.norm(psi)
    ev = evolve_coefficients(psi, hydrogen, t)
    assert abs(np.linalg.norm(ev.c) ** 2 - 1.0) <= 1e-12


@settings(max_examples=40, deadline=None)
@given(
    gamma=st.floats(min_value=-100.0, max_value=100.0),
    t1=st.floats(min_value=-100.0, max_value=100.0),
    t2=st.floats(min_value=-100.0, max_value=100.0),
    omega=st.floats(min_value=0.1, max_value=10.0),
)
def test_label_flow_composition(gamma, t1, t2, omega):
    # float addition is not associative, so exactness holds only to rounding;
    # each route makes <= 3 roundings of intermediates bounded by the sum below
    l = StateLabel(0.4, gamma)
    once = evolve_label(evolve_label(l, t1, omega), t2, omega)
    whole = evolve_label(l, t1 + t2, omega)
    scale = 1.0 + abs(gamma) + abs(omega * t1) + abs(omega * t2)
    assert once.J == whole.J
    assert abs(once.gamma - whole.gamma) <= 1e-15 * scale

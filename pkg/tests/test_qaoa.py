from functools import reduce

import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings, strategies as st

from rowqubo import (CapacityError, CostSpectrum, DomainError, QaoaParams, QuboModel, UsageError,
                     energy, evolve, expectation, optimize, sample_state, solve_brute_force)
from rowqubo.qaoa import _apply_mixer, uniform_state

X = np.array([[0, 1], [1, 0]], dtype=complex)


def dense_qaoa(energies, n, params):
    """Textbook QAOA with full 2^n x 2^n matrices; qubit i is bit i of the index."""
    state = np.full(2**n, 2 ** (-n / 2), dtype=complex)
    for gamma, beta in zip(params.gammas, params.betas):
        state = np.exp(-1j * gamma * np.asarray(energies, dtype=float)) * state
        # kron puts the first factor on the most significant bit
        mixer = reduce(np.kron, [scipy.linalg.expm(-1j * beta * X)] * n)
        state = mixer @ state
    return state


def toy_model():
    # unique minimum at x = (1, 0): energy -3
    return QuboModel(2, {(0, 0): -3, (1, 1): 1, (0, 1): 2})


def test_spectrum_matches_energy(table1_qubo):
    model, _ = table1_qubo
    spec = CostSpectrum.from_model(model)
    assert spec.energies.shape == (2**13,)
    for b in range(2**13):
        assert spec.energies[b] == energy(model, spec.assignment(b))
    assert spec.index_of(spec.assignment(1234)) == 1234


def test_spectrum_bit_convention():
    spec = CostSpectrum.from_model(QuboModel(3, {(0, 0): 1, (2, 2): 10}))
    assert spec.energies.tolist() == [0, 1, 0, 1, 10, 11, 10, 11]


def test_capacity():
    with pytest.raises(CapacityError):
        CostSpectrum.from_model(QuboModel(21, {}))
    spec = CostSpectrum.from_model(QuboModel(4, {}))
    with pytest.raises(CapacityError):
        evolve(spec, QaoaParams.zeros(1), cap=3)


def test_zero_angles_identity(table1_qubo):
    spec = CostSpectrum.from_model(table1_qubo[0])
    probs = np.abs(evolve(spec, QaoaParams.zeros(2))) ** 2
    np.testing.assert_allclose(probs, 2.0**-13, rtol=0, atol=1e-15)


def test_mixer_half_pi_flips_bit():
    for basis in (0, 1):
        state = np.zeros(2, dtype=complex)
        state[basis] = 1
        out = _apply_mixer(state.copy(), 1, np.pi / 2)
        np.testing.assert_allclose(np.abs(out) ** 2, np.roll(np.abs(state) ** 2, 1), atol=1e-15)


def test_single_qubit_evolve_against_dense():
    spec = CostSpectrum(1, np.array([0, 7]))
    params = QaoaParams([0.3], [np.pi / 2])
    np.testing.assert_allclose(evolve(spec, params), dense_qaoa([0, 7], 1, params), atol=1e-12)


angles = st.floats(-2 * np.pi, 2 * np.pi, allow_nan=False)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 4), st.integers(1, 3), st.data())
def test_evolve_matches_dense_and_preserves_norm(n, p, data):
    energies = np.array(data.draw(st.lists(st.integers(-20, 20), min_size=2**n, max_size=2**n)))
    params = QaoaParams(data.draw(st.lists(angles, min_size=p, max_size=p)),
                        data.draw(st.lists(angles, min_size=p, max_size=p)))
    spec = CostSpectrum(n, energies)
    state = evolve(spec, params)
    assert abs(np.vdot(state, state).real - 1) < 1e-12
    np.testing.assert_allclose(state, dense_qaoa(energies, n, params), atol=1e-10)


@settings(max_examples=25, deadline=None)
@given(angles, angles)
def test_mixer_period(gamma, beta):
    spec = CostSpectrum.from_model(toy_model())
    a = np.abs(evolve(spec, QaoaParams([gamma], [beta]))) ** 2
    b = np.abs(evolve(spec, QaoaParams([gamma], [beta + np.pi]))) ** 2
    np.testing.assert_allclose(a, b, atol=1e-12)


def test_norm_table1(table1_qubo):
    spec = CostSpectrum.from_model(table1_qubo[0])
    state = evolve(spec, QaoaParams([0.4, 1.1], [0.7, 0.2]))
    assert abs(np.vdot(state, state).real - 1) < 1e-12


def test_expectation_basics(table1_qubo):
    spec = CostSpectrum.from_model(table1_qubo[0])
    mean = expectation(spec, uniform_state(13))
    assert mean == pytest.approx(spec.energies.mean(), rel=1e-12)
    # 9 * E[(3 - S)^2] + 9 * 15/4 + 8/2 with S ~ Binomial(5, 1/2)
    assert mean == pytest.approx(9 * 1.5 + 9 * 15 / 4 + 4) == 51.25
    basis = np.zeros(2**13, dtype=complex)
    basis[77] = 1
    assert expectation(spec, basis) == spec.energies[77]
    with pytest.raises(DomainError):
        expectation(spec, np.zeros(8))


def test_optimize_flat_landscape():
    spec = CostSpectrum(3, np.full(8, 4))
    result = optimize(spec, 1, shots=None)
    assert result.params == QaoaParams.zeros(1)
    assert result.expectation == pytest.approx(4)
    assert all(v == pytest.approx(4, abs=1e-12) for _, v in result.optimizer_trace)


def test_optimize_table1_p1(table1_qubo):
    spec = CostSpectrum.from_model(table1_qubo[0])
    result = optimize(spec, 1, seed=0, shots=None)
    assert result.expectation < 51.25
    state = evolve(spec, result.params)
    assert abs(expectation(spec, state) - result.expectation) <= 1e-9 * abs(result.expectation)
    assert result.optimizer_trace[0] == (QaoaParams.zeros(1), pytest.approx(51.25))


def test_optimize_deterministic():
    spec = CostSpectrum.from_model(toy_model())
    a = optimize(spec, 2, seed=4, shots=64)
    b = optimize(spec, 2, seed=4, shots=64)
    assert a.params == b.params and a.samples == b.samples


def test_optimize_p3_toy_finds_minimizer():
    model = toy_model()
    spec = CostSpectrum.from_model(model)
    result = optimize(spec, 3, seed=1, shots=None)
    probs = np.abs(evolve(spec, result.params)) ** 2
    lo, winners = solve_brute_force(model)
    assert winners == [(1, 0)]
    assert spec.assignment(int(np.argmax(probs))) == winners[0]
    assert result.expectation <= expectation(spec, uniform_state(2))


def test_optimize_rejects_bad_p():
    with pytest.raises(UsageError):
        optimize(CostSpectrum(1, np.array([0, 1])), 0)


def test_sample_basis_state():
    spec = CostSpectrum.from_model(toy_model())
    state = np.zeros(4, dtype=complex)
    state[1] = 1j
    samples = sample_state(spec, state, 500, seed=2)
    assert len(samples.records) == 1
    rec = samples.first
    assert rec.assignment == (1, 0) and rec.occurrences == 500 and rec.energy == -3


def test_sample_uniform_concentration():
    spec = CostSpectrum(2, np.arange(4))
    shots = 10**6
    samples = sample_state(spec, uniform_state(2), shots, seed=123)
    sigma = np.sqrt(shots * 0.25 * 0.75)
    assert len(samples.records) == 4
    for rec in samples.records:
        assert abs(rec.occurrences - shots / 4) < 5 * sigma
    assert samples == sample_state(spec, uniform_state(2), shots, seed=123)


def test_sample_rejects_bad_shots():
    spec = CostSpectrum(1, np.array([0, 1]))
    with pytest.raises(UsageError):
        sample_state(spec, uniform_state(1), 0)

import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from qxent import channels as ch
from qxent import matcore as mc
from qxent.entropy import cross_entropy, von_neumann
from qxent.errors import DimensionError, InvariantViolation, ParameterError
from qxent.otm import (MeasuredEnsemble, jarzynski_report, prepare_input, random_ensemble, sigma_distribution,
                       sigma_from_transitions, spectral_ensemble, transition_probabilities)

from conftest import assert_close

seeds = st.integers(0, 2**32 - 1)


@st.composite
def instances(draw, max_d=8):
    d = draw(st.integers(2, max_d))
    r = draw(st.integers(1, d))
    n = draw(st.integers(1, 4))
    seed = draw(seeds)
    return random_ensemble(d, r, [seed, 0]), ch.random_channel(d, n, [seed, 1])


def test_prepare_input_commuting_case():
    rho = np.diag([0.5, 0.3, 0.2, 0.0])
    ens = prepare_input(rho, np.eye(4))
    assert_close(ens.probs, [0.5, 0.3, 0.2])
    assert ens.rank == 3
    assert_close(ens.state(), rho)


def test_prepare_input_plus_state():
    plus = mc.projector(np.array([1, 1]) / math.sqrt(2))
    ens = prepare_input(plus, mc.eig_hermitian(np.diag([1.0, -1.0])))
    assert_close(ens.probs, [0.5, 0.5])
    assert_close(np.abs(ens.kets), np.eye(2))


@given(seeds)
def test_prepare_input_haar_basis(seed):
    rho0 = mc.random_density(4, seed=[seed, 0])
    basis = mc.haar_unitary(4, [seed, 1])
    ens = prepare_input(rho0, basis)
    assert abs(ens.probs.sum() - 1) < 1e-12
    in_basis = lambda m: np.diag(basis.conj().T @ m @ basis)
    assert_close(in_basis(ens.state()), in_basis(rho0), atol=1e-12)


def test_prepare_input_errors():
    with pytest.raises(DimensionError):
        prepare_input(np.eye(3) / 3, np.eye(2))
    with pytest.raises(ParameterError):
        prepare_input(np.eye(2) / 2, np.array([[1, 1], [0, 1]]))


def test_ensemble_validation():
    with pytest.raises(ParameterError):
        MeasuredEnsemble(np.array([0.5, 0.6]), np.eye(2))
    with pytest.raises(ParameterError):
        MeasuredEnsemble(np.array([0.5, 0.5]), np.array([[1, 1], [0, 0]]))
    with pytest.raises(ParameterError):
        random_ensemble(3, 4)


def test_sigma_identity_channel_is_zero():
    ens = spectral_ensemble(mc.random_density(4, seed=1))
    assert_close(sigma_distribution(ens, ch.identity_channel(4)).sigmas, np.zeros(4), atol=1e-9)


def test_sigma_depolarizing_closed_form():
    ens = random_ensemble(5, 3, 2)
    dist = sigma_distribution(ens, ch.depolarizing_channel(5))
    assert_close(dist.sigmas, math.log(5) + np.log(ens.probs), atol=1e-12)


def test_sigma_mean_matches_entropy_change():
    ens = random_ensemble(4, 3, 3)
    phi = ch.random_channel(4, 2, 4)
    delta = von_neumann(ch.apply(phi, ens.state())) - von_neumann(ens.state())
    assert abs(sigma_distribution(ens, phi).mean() - delta) <= 1e-9


def test_sigma_dimension_error():
    with pytest.raises(DimensionError):
        sigma_distribution(random_ensemble(3, 2, 0), ch.identity_channel(2))


def test_sigma_support_violation_raises():
    # a broken channel whose outputs leave the support of its own mixture
    bad = ch.MapChannel(lambda rho: np.diag([1.0, 0.0]) if abs(rho[0, 0] - 1) < 1e-12 else np.diag([0.0, 1.0]),
                        2, 2, name="nonlinear")
    with pytest.raises(InvariantViolation):
        sigma_distribution(MeasuredEnsemble(np.array([0.5, 0.5]), np.eye(2)), bad)


def test_transition_trivial_cases():
    rho = np.diag([0.6, 0.3, 0.1])
    ens = spectral_ensemble(rho)
    P, _ = transition_probabilities(ens, ch.identity_channel(3))
    assert_close(P, np.eye(3), atol=1e-12)
    P, _ = transition_probabilities(random_ensemble(4, 2, 5), ch.depolarizing_channel(4))
    assert_close(P, np.full((2, 4), 0.25), atol=1e-12)


@given(instances())
def test_transition_identities(inst):
    ens, phi = inst
    P, q = transition_probabilities(ens, phi)
    assert_close(P.sum(axis=1), np.ones(ens.rank), atol=1e-10)
    assert_close(ens.probs @ P, q.values, atol=1e-10)
    assert_close(sigma_from_transitions(ens, P, q.values), sigma_distribution(ens, phi).sigmas, atol=1e-9)


@given(instances())
def test_jarzynski_identity_and_bound(inst):
    ens, phi = inst
    rep = jarzynski_report(ens, phi)
    assert rep.identity_residual <= 1e-9
    assert rep.mean_residual <= 1e-9
    assert rep.bound_ok
    assert rep.lhs >= math.exp(-rep.delta_S) - 1e-9


def test_rhs_is_computed_from_cross_entropies():
    ens = random_ensemble(3, 3, 8)
    phi = ch.random_channel(3, 2, 9)
    outs = [ch.apply(phi, p) for p in ens.projectors()]
    rho_out = ch.apply(phi, ens.state())
    rhs = sum(math.exp(-cross_entropy(o, rho_out)) for o in outs)
    assert jarzynski_report(ens, phi).rhs == pytest.approx(rhs, abs=1e-14)


@given(seeds, st.integers(2, 6))
def test_unitary_channel_report(seed, d):
    rep = jarzynski_report(random_ensemble(d, d, [seed, 0]), ch.unitary_channel(mc.haar_unitary(d, [seed, 1])))
    assert rep.lhs == pytest.approx(1.0, abs=1e-9)
    assert rep.rhs == pytest.approx(1.0, abs=1e-9)
    assert rep.l_otm == pytest.approx(0.0, abs=1e-9)
    assert rep.delta_S == pytest.approx(0.0, abs=1e-9)


def test_depolarizing_report():
    ens = random_ensemble(4, 2, 11)
    rep = jarzynski_report(ens, ch.depolarizing_channel(4))
    assert rep.rhs == pytest.approx(0.5, abs=1e-12)
    assert rep.l_otm == pytest.approx(math.log(2), abs=1e-12)
    assert rep.delta_S == pytest.approx(math.log(4) - von_neumann(ens.state()), abs=1e-12)
    assert rep.delta_S >= math.log(2)
    assert rep.unital


@given(seeds, st.integers(2, 6), st.integers(1, 4), st.data())
def test_unital_refinement(seed, d, n, data):
    r = data.draw(st.integers(1, d))
    rep = jarzynski_report(random_ensemble(d, r, [seed, 0]), ch.random_unitary_mixture(d, n, [seed, 1]))
    assert rep.unital
    assert -1e-9 <= rep.l_otm <= rep.delta_S + 1e-9


def test_amplitude_damping_can_lower_entropy():
    # non-unital: entropy can drop, the bound still holds and L_otm goes negative
    ens = MeasuredEnsemble(np.array([0.5, 0.5]), np.eye(2))
    rep = jarzynski_report(ens, ch.amplitude_damping(0.9))
    assert not rep.unital
    assert rep.delta_S < 0
    assert rep.l_otm < 0
    assert rep.bound_ok


@given(seeds)
def test_atoms_independent_of_degenerate_eigenbasis(seed):
    # rho_out = sigma_A (x) I/2 has doubly degenerate eigenvalues
    ens = random_ensemble(4, 3, [seed, 0])
    u = mc.haar_unitary(4, [seed, 1])
    replace_b = ch.MapChannel(
        lambda rho: np.kron(mc.partial_trace(u @ rho @ u.conj().T, (2, 2), keep="A"), np.eye(2) / 2), 4, 4)
    atoms = sigma_distribution(ens, replace_b).sigmas
    P, q = transition_probabilities(ens, replace_b)
    assert_close(sigma_from_transitions(ens, P, q.values), atoms, atol=1e-9)
    rho_out = ch.apply(replace_b, ens.state())
    sa = mc.eig_hermitian(mc.partial_trace(rho_out, (2, 2), keep="A"))
    alt = np.kron(sa.vectors, mc.haar_unitary(2, [seed, 2]))
    q_alt = np.real(np.diag(alt.conj().T @ rho_out @ alt))
    P_alt = np.array([np.real(np.diag(alt.conj().T @ ch.apply(replace_b, p) @ alt)) for p in ens.projectors()])
    assert_close(sigma_from_transitions(ens, P_alt, q_alt), atoms, atol=1e-9)

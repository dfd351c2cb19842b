import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from qxent import channels as ch
from qxent import matcore as mc
from qxent import spinboson as sb
from qxent import thermo
from qxent.errors import DimensionError, ParameterError, SpecialCaseViolation, UnitarityError

from conftest import assert_close

seeds = st.integers(0, 2**32 - 1)


def random_setup(seed, d_s=2, d_b=2):
    h_s0 = mc.random_hermitian(d_s, [seed, 0])
    h_b = mc.random_hermitian(d_b, [seed, 1])
    u = mc.haar_unitary(d_s * d_b, [seed, 2])
    beta = float(np.random.default_rng([seed, 3]).uniform(0.5, 2.0))
    return thermo.synthesized_setup(h_s0, h_b, u, beta)


def test_gibbs_examples():
    rho, z = thermo.gibbs(np.zeros((3, 3)), 1.3)
    assert_close(rho, np.eye(3) / 3)
    assert z == pytest.approx(3.0)
    w, beta = 1.4, 0.7
    rho, z = thermo.gibbs(np.diag([w / 2, -w / 2]), beta)
    z_exact = math.exp(-beta * w / 2) + math.exp(beta * w / 2)
    assert z == pytest.approx(z_exact, rel=1e-14)
    assert_close(np.diag(rho).real, [math.exp(-beta * w / 2) / z_exact, math.exp(beta * w / 2) / z_exact])
    h = mc.random_hermitian(4, 5)
    ground = mc.eig_hermitian(h).vectors[:, -1]
    assert_close(thermo.gibbs(h, 400.0)[0], mc.projector(ground), atol=1e-9)


def test_gibbs_errors():
    with pytest.raises(ParameterError):
        thermo.gibbs(np.eye(2), 0.0)
    with pytest.raises(ValueError):
        thermo.gibbs(np.array([[0, 1], [0, 0]]), 1.0)


def test_gibbs_large_energies_do_not_overflow():
    rho, _ = thermo.gibbs(np.diag([-2000.0, 0.0]), 1.0)
    assert_close(rho, np.diag([1.0, 0.0]))


def _setup(h0, h1, beta=1.0, u=None):
    d = h0.shape[0]
    return thermo.ThermoSetup(h0, h1, np.zeros((2, 2)), np.eye(2 * d) if u is None else u, beta)


def test_free_energy_examples():
    h = mc.random_hermitian(3, 1)
    assert thermo.free_energy_difference(_setup(h, h)) == pytest.approx(0.0, abs=1e-14)
    assert thermo.free_energy_difference(_setup(h, h + 0.6 * np.eye(3))) == pytest.approx(0.6, abs=1e-12)
    h1, h2 = np.diag([0.5, -0.5]), np.diag([1.0, -1.0])
    z1, z2 = 2 * math.cosh(0.5), 2 * math.cosh(1.0)
    assert thermo.free_energy_difference(_setup(h1, h2)) == pytest.approx(-math.log(z2 / z1), abs=1e-12)


def test_setup_validation():
    with pytest.raises(DimensionError):
        thermo.ThermoSetup(np.eye(2), np.eye(3), np.eye(2), np.eye(4), 1.0)
    with pytest.raises(UnitarityError):
        thermo.ThermoSetup(np.eye(2), np.eye(2), np.eye(2), 2 * np.eye(4), 1.0)
    with pytest.raises(ParameterError):
        thermo.ThermoSetup(np.eye(2), np.eye(2), np.eye(2), np.eye(4), -1.0)


def test_guessed_objects_factorized():
    h_s0 = mc.random_hermitian(2, 2)
    h_b = mc.random_hermitian(3, 3)
    us = mc.haar_unitary(2, 4)
    setup = thermo.ThermoSetup(h_s0, us @ h_s0 @ us.conj().T, h_b, np.kron(us, np.eye(3)), 0.9)
    g = thermo.guessed_objects(setup)
    expected = np.kron(thermo.gibbs(setup.h_s_tau, 0.9)[0], thermo.gibbs(h_b, 0.9)[0])
    assert_close(g.theta_sb, expected, atol=1e-12)
    assert g.q_guess == pytest.approx(0.0, abs=1e-12)


def test_guessed_objects_identity_evolution():
    h_s0 = mc.random_hermitian(2, 5)
    h_b = mc.random_hermitian(2, 6)
    g = thermo.guessed_objects(thermo.ThermoSetup(h_s0, h_s0, h_b, np.eye(4), 1.1))
    assert_close(g.theta_sb, np.kron(thermo.gibbs(h_s0, 1.1)[0], thermo.gibbs(h_b, 1.1)[0]), atol=1e-12)


@given(seeds)
def test_guessed_state_is_density(seed):
    g = thermo.guessed_objects(random_setup(seed))
    assert abs(np.trace(g.theta_sb) - 1) <= 1e-10
    assert np.linalg.eigvalsh(g.theta_sb).min() >= -mc.EPS_PSD
    assert g.z_tilde == pytest.approx(np.exp(-random_setup(seed).beta * g.guessed_energies).sum(), rel=1e-12)


def test_guessed_objects_flags_degeneracy():
    setup = thermo.ThermoSetup(np.eye(2), np.eye(2), np.diag([0.0, 1.0]), np.eye(4), 1.0)
    assert thermo.guessed_objects(setup).degenerate


def test_synthesize_examples():
    h, flag = thermo.synthesize_final_hamiltonian(np.eye(3) / 3, 2.0)
    assert_close(h, math.log(3) / 2 * np.eye(3))
    assert not flag
    h, _ = thermo.synthesize_final_hamiltonian(np.diag([0.7, 0.3]), 1.0)
    assert_close(h, np.diag([-math.log(0.7), -math.log(0.3)]), atol=1e-14)
    assert_close(thermo.gibbs(h, 1.0)[0], np.diag([0.7, 0.3]), atol=1e-12)


@given(seeds, st.integers(1, 5), st.floats(0.2, 5))
def test_synthesize_round_trip(seed, d, beta):
    rho = mc.random_density(d, seed=seed)
    h, flag = thermo.synthesize_final_hamiltonian(rho, beta)
    assert not flag
    assert_close(thermo.gibbs(h, beta)[0], rho, atol=1e-9)


def test_synthesize_flags_rank_deficiency():
    _, flag = thermo.synthesize_final_hamiltonian(np.diag([1.0, 0.0]), 1.0)
    assert flag


def test_identity_factorized_case():
    h_s0 = mc.random_hermitian(2, 7)
    h_b = mc.random_hermitian(2, 8)
    rep = thermo.guessed_heat_identity_report(thermo.ThermoSetup(h_s0, h_s0, h_b, np.eye(4), 1.0))
    assert rep.lhs == pytest.approx(1.0, abs=1e-12)
    assert rep.rhs_product == pytest.approx(1.0, abs=1e-12)
    assert rep.q_guess == pytest.approx(0.0, abs=1e-12)
    assert rep.guessed_relative_entropy == pytest.approx(0.0, abs=1e-10)


@given(seeds, st.sampled_from([(2, 2), (2, 3), (3, 2)]))
def test_identity_random_instances(seed, dims):
    rep = thermo.guessed_heat_identity_report(random_setup(seed, *dims))
    assert rep.identity_residual <= 1e-8
    assert rep.second_law_ok and rep.second_law_slack >= -1e-9
    assert rep.exergy_ok
    assert rep.sigma_energy_residual <= 1e-9
    assert rep.precondition_residual <= 1e-9


def test_identity_spin_boson_pipeline():
    p = sb.SpinBosonParams(1.0, ((1.0, 0.2),), beta=1.0, tau=math.pi, fock_cutoff=12)
    model = sb.build_truncated_model(p)
    u = mc.propagator(model.h_total, p.tau)
    setup = thermo.synthesized_setup(0.5 * sb.SIGMA_Z, model.h_b, u, p.beta)
    rep = thermo.guessed_heat_identity_report(setup)
    assert rep.identity_residual <= 1e-8
    assert rep.second_law_ok and rep.exergy_ok


def test_precondition_violation():
    h_s0 = mc.random_hermitian(2, 9)
    setup = thermo.ThermoSetup(h_s0, h_s0, mc.random_hermitian(2, 10), mc.haar_unitary(4, 11), 1.0)
    with pytest.raises(SpecialCaseViolation):
        thermo.guessed_heat_identity_report(setup)


def test_exponential_identity_holds_for_any_final_hamiltonian():
    # the identity itself only needs the normalizing-sum guessed state
    h_s0 = mc.random_hermitian(2, 12)
    h_b = mc.random_hermitian(2, 13)
    setup = thermo.ThermoSetup(h_s0, mc.random_hermitian(2, 14), h_b, mc.haar_unitary(4, 15), 0.8)
    g = thermo.guessed_objects(setup)
    energies, kets = thermo.energy_basis(setup)
    b = setup.beta
    z0 = np.exp(-b * energies).sum()
    lhs = np.sum(np.exp(-b * energies) / z0 * np.exp(-b * (g.guessed_energies - energies)))
    from qxent.entropy import relative_entropy
    rho_tau = thermo.gibbs(setup.h_s_tau, b)[0]
    rel = relative_entropy(g.theta_sb, np.kron(rho_tau, setup.rho_b_eq()))
    rhs = math.exp(-b * thermo.free_energy_difference(setup)) * math.exp(-b * g.q_guess) * math.exp(-rel)
    assert lhs == pytest.approx(rhs, abs=1e-10)

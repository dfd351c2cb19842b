import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.integrate import dblquad, quad, trapezoid

from qxent import channels as ch
from qxent import matcore as mc
from qxent import spinboson as sb
from qxent.errors import ParameterError
from qxent.otm import MeasuredEnsemble, random_ensemble

from conftest import assert_close

PLUS_MINUS = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)


def one_mode(omega=1.0, g=0.5, beta=1.0, tau=math.pi, cutoff=12, omega0=1.0):
    return sb.SpinBosonParams(omega0, ((omega, g),), beta=beta, tau=tau, fock_cutoff=cutoff)


def test_params_validation():
    with pytest.raises(ParameterError):
        one_mode(omega=0.0)
    with pytest.raises(ParameterError):
        one_mode(beta=-1.0)
    with pytest.raises(ParameterError):
        one_mode(tau=-1.0)
    with pytest.raises(ParameterError):
        one_mode(cutoff=1)


def test_magnus_trivial_values():
    G, h1 = sb.magnus_terms(one_mode(g=0.3 + 0.2j), 0.0)
    assert_close(G, [0.3 + 0.2j])
    assert h1 == 0.0
    G, _ = sb.magnus_terms(one_mode(omega=1.0, g=1.0), 2 * math.pi)
    assert abs(G[0]) < 1e-15


def test_magnus_quadrature_oracle():
    w, g, t = 2.0, 0.5, 1.0
    G, h1 = sb.magnus_terms(one_mode(omega=w, g=g), t)
    re = quad(lambda s: math.cos(w * s), 0, t, epsabs=1e-14)[0]
    im = quad(lambda s: -math.sin(w * s), 0, t, epsabs=1e-14)[0]
    assert abs(G[0] - g * complex(re, im) / t) < 1e-12
    # second order: -(|g|^2/t) int_0^t dt1 int_0^t1 sin(w (t1 - t2)) dt2
    inner = dblquad(lambda t2, t1: math.sin(w * (t1 - t2)), 0, t, 0, lambda t1: t1, epsabs=1e-14)[0]
    assert abs(h1 - (-(g**2) / t * inner)) < 1e-12


def test_magnus_reproduces_interaction_picture_propagator():
    # the second-order term is a c-number, so the expansion terminates
    p = one_mode(omega=1.3, g=0.4 - 0.1j, cutoff=40)
    t = 0.9
    model = sb.build_truncated_model(p)
    a = np.kron(np.eye(2), sb.annihilation(40))
    sz = np.kron(sb.SIGMA_Z, np.eye(40))
    h_free = (p.omega0 / 2) * sz + np.kron(np.eye(2), model.h_b)
    u_int = mc.propagator(h_free, -t) @ mc.propagator(model.h_total, t)
    G, h1 = sb.magnus_terms(p, t)
    h_eff = sz @ (G[0] * a + np.conj(G[0]) * a.conj().T) + h1 * np.eye(80)
    u_magnus = mc.propagator(h_eff, t)
    low = [n for n in range(80) if n % 40 < 4]
    assert_close(u_int[np.ix_(low, low)], u_magnus[np.ix_(low, low)], atol=1e-9)


def test_delta_E_b_analytic_examples():
    assert sb.delta_E_b_analytic(one_mode(tau=0.0)) == 0.0
    assert sb.delta_E_b_analytic(one_mode(g=0.8, tau=2 * math.pi)) == pytest.approx(0.0, abs=1e-15)
    assert sb.delta_E_b_analytic(one_mode()) == pytest.approx(1.0, abs=1e-15)


@given(st.floats(0.1, 5), st.complex_numbers(max_magnitude=2), st.floats(0, 20))
def test_delta_E_b_analytic_nonnegative(omega, g, tau):
    assert sb.delta_E_b_analytic(one_mode(omega=omega, g=g, tau=tau)) >= 0


def test_truncated_model_zero_coupling():
    p = sb.SpinBosonParams(0.7, ((1.0, 0.0), (2.0, 0.0)), beta=1.0, fock_cutoff=3)
    m = sb.build_truncated_model(p)
    expected = 0.35 * np.kron(sb.SIGMA_Z, np.eye(9)) + np.kron(np.eye(2), m.h_b)
    assert np.array_equal(m.h_total, expected)


def test_truncated_model_hand_assembled():
    w0, w, g = 0.8, 1.5, 0.3 + 0.4j
    m = sb.build_truncated_model(sb.SpinBosonParams(w0, ((w, g),), beta=1.0, fock_cutoff=2))
    # basis |s, n>: |0,0>, |0,1>, |1,0>, |1,1>; sigma_z = diag(1, -1)
    h = np.array([
        [w0 / 2, g, 0, 0],
        [np.conj(g), w0 / 2 + w, 0, 0],
        [0, 0, -w0 / 2, -g],
        [0, 0, -np.conj(g), -w0 / 2 + w],
    ])
    assert_close(m.h_total, h, atol=1e-15)


def test_bath_gibbs_populations():
    m = sb.build_truncated_model(one_mode(omega=1.2, beta=0.8, cutoff=6))
    pops = np.exp(-0.8 * 1.2 * np.arange(6))
    assert_close(np.diag(m.rho_b_eq).real, pops / pops.sum(), atol=1e-14)
    assert m.tail_mass == pytest.approx(math.exp(-0.8 * 1.2 * 6), rel=1e-12)


def test_dimension_guard():
    with pytest.raises(ParameterError):
        sb.build_truncated_model(sb.SpinBosonParams(1.0, ((1.0, 0.1),) * 3, beta=1.0, fock_cutoff=30))


def test_decoupled_simulation():
    p = one_mode(g=0.0, tau=1.1, omega0=0.9)
    sim = sb.simulate_thermal_operation(p)
    rho = mc.random_density(2, seed=1)
    u = np.diag(np.exp([-0.45j * 1.1, 0.45j * 1.1]))
    assert_close(ch.apply(sim.channel, rho), u @ rho @ u.conj().T, atol=1e-12)
    assert abs(sim.delta_E_b_numeric) < 1e-12


def test_cutoff_sweep_converges_monotonically():
    vals = sb.cutoff_sweep(one_mode(), range(8, 26, 2))
    errors = np.abs(np.array(vals) - 1.0)
    assert np.all(np.diff(errors) < 0)
    assert errors[-1] <= 1e-6


@pytest.mark.parametrize("beta,g", [(0.5, 0.3), (1.0, 1.0), (2.0, 0.7j)])
def test_cutoff_convergence_other_parameters(beta, g):
    p = one_mode(g=g, beta=beta, tau=1.7)
    errors = np.abs(np.array(sb.cutoff_sweep(p, [8, 12, 16, 24, 32, 40])) - sb.delta_E_b_analytic(p))
    for a, b in zip(errors, errors[1:]):
        assert b < a or b <= 1e-8


def test_converged_delta_E_b():
    value, cutoff, prev = sb.converged_delta_E_b(one_mode())
    assert abs(value - 1.0) <= 1e-6
    assert abs(value - prev) <= 1e-6 * value
    with pytest.raises(ParameterError):
        sb.converged_delta_E_b(one_mode(), start=4, max_cutoff=8)


@given(st.floats(0, 2), st.floats(0.3, 2), st.complex_numbers(max_magnitude=1), st.floats(0, 7), st.floats(0.5, 2))
def test_reduced_channel_is_dephasing(omega0, omega, g, tau, beta):
    p = sb.SpinBosonParams(omega0, ((omega, g),), beta=beta, tau=tau, fock_cutoff=8)
    sim = sb.simulate_thermal_operation(p)
    assert sim.unital_residual <= 1e-9
    rho = mc.random_density(2, seed=3)
    assert_close(np.diag(ch.apply(sim.channel, rho)), np.diag(rho), atol=1e-9)


def test_spectral_zero_and_bump():
    grid = np.linspace(0, 5, 2001)
    assert sb.delta_E_b_spectral(sb.SpectralDensity(grid, np.zeros_like(grid)), 3.0) == 0.0
    # a narrow bump of area w |g|^2 stands in for one discrete mode
    w, g, width = 1.0, 0.5, 2e-3
    grid = np.linspace(w - 20 * width, w + 20 * width, 4001)
    bump = w * g**2 * np.exp(-((grid - w) ** 2) / (2 * width**2)) / (width * math.sqrt(2 * math.pi))
    val = sb.delta_E_b_spectral(sb.SpectralDensity(grid, bump), math.pi)
    assert val == pytest.approx(sb.delta_E_b_analytic(one_mode()), abs=1e-4)


def test_spectral_ohmic_closed_form():
    # s = 1: alpha ln(1 + wc^2 tau^2), growing without bound in tau
    alpha, wc = 0.1, 1.0
    grid = np.linspace(0, 60, 240001)
    j = sb.ohmic_density(grid, alpha, wc)
    for tau in (1.0, 5.0, 50.0):
        assert sb.delta_E_b_spectral(j, tau) == pytest.approx(alpha * math.log(1 + wc**2 * tau**2), rel=1e-5)


def test_spectral_superohmic_decay():
    # s = 3 with a = 1/wc: 2 alpha (wc^2 + (tau^2 - a^2)/(a^2 + tau^2)^2), decays to 2 alpha wc^2
    alpha, wc = 0.1, 2.0
    a = 1 / wc
    grid = np.linspace(0, 100, 400001)
    j = sb.ohmic_density(grid, alpha, wc, s=3)
    exact = lambda tau: 2 * alpha * (wc**2 + (tau**2 - a**2) / (a**2 + tau**2) ** 2)
    v1, v50 = sb.delta_E_b_spectral(j, 1.0), sb.delta_E_b_spectral(j, 50.0)
    assert v1 == pytest.approx(exact(1.0), rel=1e-6)
    assert v50 == pytest.approx(exact(50.0), rel=1e-6)
    assert v50 < v1
    # the long-time value is twice the integral of J / w^2, not zero
    long_time = 2 * trapezoid(j.values[1:] / grid[1:] ** 2, grid[1:])
    assert v50 == pytest.approx(long_time, rel=1e-3)


def test_spectral_density_validation():
    with pytest.raises(ParameterError):
        sb.SpectralDensity(np.array([0.0, 0.0, 1.0]), np.ones(3))
    with pytest.raises(ParameterError):
        sb.SpectralDensity(np.array([0.0, 1.0]), np.array([1.0, np.nan]))


def test_bound_report_decoupled():
    ens = MeasuredEnsemble(np.array([0.7, 0.3]), PLUS_MINUS)
    rep = sb.spinboson_bound_report(one_mode(g=0.0), ens)
    assert rep.delta_S == pytest.approx(0.0, abs=1e-12)
    assert rep.l_otm == pytest.approx(0.0, abs=1e-12)
    assert rep.minus_beta_delta_E_b == pytest.approx(0.0, abs=1e-12)
    assert rep.chain_ok


def test_bound_report_reference_point():
    ens = MeasuredEnsemble(np.array([0.7, 0.3]), PLUS_MINUS)
    rep = sb.spinboson_bound_report(one_mode(cutoff=24), ens)
    assert rep.chain_ok
    assert rep.l_otm > 0
    assert rep.delta_S >= rep.l_otm
    assert rep.minus_beta_delta_E_b == pytest.approx(-1.0, abs=1e-6)
    assert rep.exergy <= rep.exergy_ub + 1e-9


def test_bound_report_random_draws():
    for k in range(20):
        rng = np.random.default_rng([k, 30])
        p = sb.SpinBosonParams(rng.uniform(0, 2), ((rng.uniform(0.5, 2), complex(*rng.uniform(-0.7, 0.7, 2))),),
                               beta=rng.uniform(0.5, 2), tau=rng.uniform(0, 2 * math.pi), fock_cutoff=10)
        assert sb.spinboson_bound_report(p, random_ensemble(2, 2, [k, 31])).chain_ok


def test_bound_report_needs_qubit():
    with pytest.raises(ParameterError):
        sb.spinboson_bound_report(one_mode(), random_ensemble(3, 2, 0))

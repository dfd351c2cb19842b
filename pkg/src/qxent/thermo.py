"""Gibbs states, free energies and the guessed-heat bookkeeping.

The guessed-heat identity needs ``rho_in`` Gibbs for ``H_s(0)`` and
``rho_out`` Gibbs for ``H_s(tau)``.  :func:`synthesized_setup` enforces the
second condition by defining ``H_s(tau) = -ln(rho_out)/beta``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp

from . import matcore as mc
from .channels import apply, thermal_operation
from .entropy import cross_entropy, relative_entropy, von_neumann
from .errors import DimensionError, ParameterError, SpecialCaseViolation, UnitarityError
from .otm import BOUND_SLACK, MeasuredEnsemble, sigma_distribution

PRECONDITION_TOL = 1e-6


def gibbs(h: np.ndarray, beta: float) -> tuple[np.ndarray, float]:
    """``exp(-beta h)/Z`` and ``Z``; ``Z`` may be ``inf`` while the state stays finite."""
    if beta <= 0:
        raise ParameterError("beta must be positive")
    w, v = mc.eig_hermitian(h)
    log_z = float(logsumexp(-beta * w))
    pops = np.exp(-beta * w - log_z)
    z = math.exp(log_z) if log_z < 709.0 else math.inf
    return mc.hermitianize((v * pops) @ v.conj().T), z


def log_partition(h: np.ndarray, beta: float) -> float:
    return float(logsumexp(-beta * mc.eig_hermitian(h).values))


@dataclass(frozen=True)
class ThermoSetup:
    h_s0: np.ndarray
    h_s_tau: np.ndarray
    h_b: np.ndarray
    u_tau: np.ndarray
    beta: float

    def __post_init__(self):
        d_s, d_b = self.h_s0.shape[0], self.h_b.shape[0]
        if self.h_s_tau.shape != self.h_s0.shape or self.u_tau.shape != (d_s * d_b, d_s * d_b):
            raise DimensionError("Hamiltonians and unitary have inconsistent dimensions")
        mc.check_hermitian(self.h_s0)
        mc.check_hermitian(self.h_s_tau)
        mc.check_hermitian(self.h_b)
        if mc.unitarity_residual(self.u_tau) > mc.EPS_NUM * d_s * d_b:
            raise UnitarityError("total evolution is not unitary")
        if self.beta <= 0:
            raise ParameterError("beta must be positive")

    @property
    def dims(self) -> tuple[int, int]:
        return self.h_s0.shape[0], self.h_b.shape[0]

    def rho_b_eq(self) -> np.ndarray:
        return gibbs(self.h_b, self.beta)[0]

    def channel(self):
        return thermal_operation(self.u_tau, self.rho_b_eq(), self.dims)


@dataclass(frozen=True)
class GuessedObjects:
    theta_sb: np.ndarray
    q_guess: float
    z_tilde: float
    guessed_energies: np.ndarray
    degenerate: bool


@dataclass(frozen=True)
class GuessedHeatReport:
    lhs: float
    rhs_product: float
    identity_residual: float
    delta_S: float
    q_guess: float
    guessed_relative_entropy: float
    second_law_slack: float
    second_law_ok: bool
    delta_E_s: float
    exergy: float
    exergy_ub: float
    exergy_ok: bool
    delta_F: float
    precondition_residual: float
    sigma_energy_residual: float


def free_energy_difference(setup: ThermoSetup) -> float:
    """``-ln(Z_tau/Z_0)/beta``."""
    b = setup.beta
    return -(log_partition(setup.h_s_tau, b) - log_partition(setup.h_s0, b)) / b


def energy_basis(setup: ThermoSetup) -> mc.EigenSystem:
    return mc.eig_hermitian(setup.h_s0)


def guessed_objects(setup: ThermoSetup, rho_b_eq: np.ndarray | None = None) -> GuessedObjects:
    """Guessed state ``Theta_sb(tau)`` and guessed heat, normalized by the sum of weights."""
    d_s, d_b = setup.dims
    rho_b = setup.rho_b_eq() if rho_b_eq is None else np.asarray(rho_b_eq, dtype=complex)
    if rho_b.shape != (d_b, d_b):
        raise DimensionError("bath state does not match H_b")
    phi = thermal_operation(setup.u_tau, rho_b, setup.dims)
    energies, kets = energy_basis(setup)
    u = setup.u_tau
    evolved = []
    guessed = np.empty(d_s)
    for i in range(d_s):
        proj = mc.projector(kets[:, i])
        guessed[i] = float(np.real(np.trace(apply(phi, proj) @ setup.h_s_tau)))
        evolved.append(u @ np.kron(proj, rho_b) @ u.conj().T)
    log_w = -setup.beta * guessed
    log_z = float(logsumexp(log_w))
    weights = np.exp(log_w - log_z)
    theta = mc.hermitianize(sum(w * m for w, m in zip(weights, evolved)))
    h_b_full = np.kron(np.eye(d_s), setup.h_b)
    q = float(np.real(np.trace(setup.h_b @ rho_b)) - np.real(np.trace(h_b_full @ theta)))
    degenerate = bool(np.any(np.abs(np.diff(energies)) < 1e-9))
    return GuessedObjects(theta_sb=theta, q_guess=q, z_tilde=math.exp(log_z) if log_z < 709.0 else math.inf,
                          guessed_energies=guessed, degenerate=degenerate)


def synthesize_final_hamiltonian(rho_out: np.ndarray, beta: float,
                                 rank_tol: float = mc.RANK_TOL) -> tuple[np.ndarray, bool]:
    """``H = -ln(rho_out)/beta`` so that ``gibbs(H, beta)`` returns ``rho_out``.

    Eigenvalues below ``rank_tol * lambda_max`` are raised to that floor;
    the second return value flags when this happened.
    """
    w, v = mc.eig_hermitian(rho_out)
    floor = rank_tol * max(w[0], 0.0)
    deficient = bool(np.any(w <= floor))
    w = np.maximum(w, floor)
    return mc.hermitianize((v * (-np.log(w) / beta)) @ v.conj().T), deficient


def synthesized_setup(h_s0: np.ndarray, h_b: np.ndarray, u_tau: np.ndarray, beta: float) -> ThermoSetup:
    """Setup whose final Hamiltonian makes ``rho_out`` exactly Gibbs."""
    d_s, d_b = h_s0.shape[0], h_b.shape[0]
    rho_in, _ = gibbs(h_s0, beta)
    rho_b, _ = gibbs(h_b, beta)
    rho_out = apply(thermal_operation(u_tau, rho_b, (d_s, d_b)), rho_in)
    h_tau, _ = synthesize_final_hamiltonian(rho_out, beta)
    return ThermoSetup(h_s0=h_s0, h_s_tau=h_tau, h_b=h_b, u_tau=u_tau, beta=beta)


def guessed_heat_identity_report(setup: ThermoSetup, slack: float = BOUND_SLACK) -> GuessedHeatReport:
    """Exponential energy identity, second-law-like inequality and exergy bound.

    Raises :class:`SpecialCaseViolation` when ``rho_out`` is not the Gibbs
    state of ``h_s_tau`` within ``PRECONDITION_TOL``.
    """
    b = setup.beta
    rho_in, _ = gibbs(setup.h_s0, b)
    rho_b = setup.rho_b_eq()
    phi = thermal_operation(setup.u_tau, rho_b, setup.dims)
    rho_out = apply(phi, rho_in)
    rho_tau, _ = gibbs(setup.h_s_tau, b)
    precondition = float(np.linalg.norm(rho_out - rho_tau))
    if precondition > PRECONDITION_TOL:
        raise SpecialCaseViolation(f"rho_out is not Gibbs for H_s(tau): residual {precondition:.3e}")

    energies, kets = energy_basis(setup)
    g = guessed_objects(setup, rho_b)
    log_z0 = log_partition(setup.h_s0, b)
    delta_F = free_energy_difference(setup)
    # <exp(-beta dE)> with dE_i = Tr[Phi(|E_i><E_i|) H_s(tau)] - E_i
    lhs = float(np.sum(np.exp(-b * energies - log_z0) * np.exp(-b * (g.guessed_energies - energies))))
    rel = relative_entropy(g.theta_sb, np.kron(rho_tau, rho_b))
    rhs = math.exp(-b * delta_F) * math.exp(-b * g.q_guess) * math.exp(-rel)

    delta_S = von_neumann(rho_out) - von_neumann(rho_in)
    second_law = delta_S - b * g.q_guess
    delta_E_s = float(np.real(np.trace(rho_out @ setup.h_s_tau) - np.trace(rho_in @ setup.h_s0)))
    projs = [mc.projector(kets[:, i]) for i in range(kets.shape[1])]
    overlap_sum = sum(math.exp(-cross_entropy(apply(phi, p), rho_out)) for p in projs)
    exergy = delta_E_s - delta_S / b
    exergy_ub = delta_E_s + math.log(overlap_sum) / b

    # sigma atoms against beta (dE_i - dF)
    ens = MeasuredEnsemble(np.exp(-b * energies - log_z0), kets)
    sig = sigma_distribution(ens, phi)
    sigma_energy = float(np.max(np.abs(sig.sigmas - b * (g.guessed_energies - energies - delta_F))))

    return GuessedHeatReport(
        lhs=lhs, rhs_product=rhs, identity_residual=abs(lhs - rhs),
        delta_S=delta_S, q_guess=g.q_guess, guessed_relative_entropy=rel,
        second_law_slack=second_law, second_law_ok=second_law >= -slack,
        delta_E_s=delta_E_s, exergy=exergy, exergy_ub=exergy_ub,
        exergy_ok=exergy <= exergy_ub + slack,
        delta_F=delta_F, precondition_residual=precondition, sigma_energy_residual=sigma_energy,
    )

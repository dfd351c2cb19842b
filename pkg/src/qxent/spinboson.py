"""Spin-boson dephasing: closed-form bath energy and a truncated-Fock simulation.

Hamiltonian (hbar = 1)::

    H = (w0/2) sz + sum_k w_k a_k^dag a_k + sz (x) sum_k (g_k a_k + g_k^* a_k^dag)
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np
from scipy.integrate import trapezoid

from . import matcore as mc
from .channels import MapChannel, apply, thermal_operation, unital_residual
from .errors import ParameterError
from .otm import BOUND_SLACK, MeasuredEnsemble, jarzynski_report
from .thermo import gibbs

MAX_DIM = 2**14
SIGMA_Z = np.diag([1.0, -1.0]).astype(complex)


@dataclass(frozen=True)
class SpinBosonParams:
    omega0: float
    modes: tuple[tuple[float, complex], ...]
    beta: float
    tau: float = 0.0
    fock_cutoff: int = 12

    def __post_init__(self):
        modes = tuple((float(w), complex(g)) for w, g in self.modes)
        if any(w <= 0 for w, _ in modes):
            raise ParameterError("mode frequencies must be positive")
        if self.beta <= 0:
            raise ParameterError("beta must be positive")
        if self.tau < 0:
            raise ParameterError("evolution time must be non-negative")
        if self.fock_cutoff < 2:
            raise ParameterError("Fock cutoff must be at least 2")
        object.__setattr__(self, "modes", modes)

    @property
    def omegas(self) -> np.ndarray:
        return np.array([w for w, _ in self.modes])

    @property
    def couplings(self) -> np.ndarray:
        return np.array([g for _, g in self.modes], dtype=complex)

    @property
    def bath_dim(self) -> int:
        return self.fock_cutoff ** len(self.modes)


@dataclass(frozen=True)
class TruncatedModel:
    h_total: np.ndarray
    h_b: np.ndarray
    rho_b_eq: np.ndarray
    tail_mass: float
    bath_dim: int


@dataclass(frozen=True)
class ThermalSimReport:
    channel: MapChannel
    delta_E_b_numeric: float
    unital_residual: float
    u_total: np.ndarray
    model: TruncatedModel


@dataclass(frozen=True)
class SpectralDensity:
    omega: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        omega = np.asarray(self.omega, dtype=float)
        values = np.asarray(self.values, dtype=float)
        if omega.shape != values.shape or omega.ndim != 1:
            raise ParameterError("grid and values must be matching 1-d arrays")
        if np.any(np.diff(omega) <= 0):
            raise ParameterError("frequency grid must be strictly increasing")
        if not np.all(np.isfinite(values)):
            raise ParameterError("spectral density must be finite")
        object.__setattr__(self, "omega", omega)
        object.__setattr__(self, "values", values)


@dataclass(frozen=True)
class SpinBosonBoundReport:
    delta_S: float
    l_otm: float
    minus_beta_delta_E_b: float
    minus_beta_delta_E_b_analytic: float
    delta_E_s: float
    exergy: float
    exergy_ub: float
    chain_ok: bool


def _sinc(x: np.ndarray) -> np.ndarray:
    # sin(x)/x with the x -> 0 limit
    return np.sinc(np.asarray(x, dtype=float) / np.pi)


def magnus_terms(p: SpinBosonParams, t: float) -> tuple[np.ndarray, float]:
    """First-order amplitudes ``G_k(t)`` and the scalar second-order term.

    ``G_k(t) = g_k sinc(w_k t/2) exp(-i w_k t/2)``;
    ``h1 = -sum_k |g_k|^2/w_k (1 - sinc(w_k t))``, zero at ``t = 0``.
    """
    if t < 0:
        raise ParameterError("time must be non-negative")
    w, g = p.omegas, p.couplings
    G = g * _sinc(w * t / 2) * np.exp(-0.5j * w * t)
    h1 = float(-np.sum(np.abs(g) ** 2 / w * (1.0 - _sinc(w * t))))
    return G, h1


def delta_E_b_analytic(p: SpinBosonParams, tau: float | None = None) -> float:
    """``sum_k w_k |g_k|^2 (sin(w_k tau/2)/(w_k/2))^2``."""
    tau = p.tau if tau is None else tau
    w, g = p.omegas, p.couplings
    return float(np.sum(w * np.abs(g) ** 2 * (np.sin(w * tau / 2) / (w / 2)) ** 2))


def annihilation(cutoff: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1, cutoff)), k=1).astype(complex)


def _embed(op: np.ndarray, k: int, n_modes: int, cutoff: int) -> np.ndarray:
    mats = [np.eye(cutoff, dtype=complex)] * n_modes
    mats[k] = op
    return mc.tensor(*mats) if n_modes > 1 else op


def build_truncated_model(p: SpinBosonParams) -> TruncatedModel:
    """Qubit (x) truncated bosonic modes; the qubit is the first tensor factor."""
    n = len(p.modes)
    c = p.fock_cutoff
    d_b = c ** n
    if 2 * d_b > MAX_DIM:
        raise ParameterError(f"total dimension {2 * d_b} exceeds {MAX_DIM}")
    a = annihilation(c)
    number = a.conj().T @ a
    h_b = np.zeros((d_b, d_b), dtype=complex)
    coupling = np.zeros((d_b, d_b), dtype=complex)
    for k, (w, g) in enumerate(p.modes):
        h_b += w * _embed(number, k, n, c)
        ak = _embed(a, k, n, c)
        coupling += g * ak + np.conj(g) * ak.conj().T
    eye_b = np.eye(d_b, dtype=complex)
    h_total = (p.omega0 / 2) * np.kron(SIGMA_Z, eye_b) + np.kron(np.eye(2), h_b) + np.kron(SIGMA_Z, coupling)
    rho_b, _ = gibbs(h_b, p.beta)
    tail = 1.0 - float(np.prod([1.0 - math.exp(-p.beta * w * c) for w in p.omegas]))
    return TruncatedModel(h_total=h_total, h_b=h_b, rho_b_eq=rho_b, tail_mass=tail, bath_dim=d_b)


def bath_energy_change(model: TruncatedModel, u_total: np.ndarray, rho_in: np.ndarray) -> float:
    joint = u_total @ np.kron(rho_in, model.rho_b_eq) @ u_total.conj().T
    bath = mc.partial_trace(joint, (2, model.bath_dim), keep="B")
    return float(np.real(np.trace(bath @ model.h_b)) - np.real(np.trace(model.rho_b_eq @ model.h_b)))


def simulate_thermal_operation(p: SpinBosonParams, rho_in: np.ndarray | None = None) -> ThermalSimReport:
    """Exact evolution with the time-independent Hamiltonian in the Schrodinger picture.

    ``H_b`` commutes with the free part, so the bath energy here equals the
    interaction-picture value.
    """
    model = build_truncated_model(p)
    u = mc.propagator(model.h_total, p.tau)
    phi = thermal_operation(u, model.rho_b_eq, (2, model.bath_dim))
    rho_in = np.eye(2, dtype=complex) / 2 if rho_in is None else np.asarray(rho_in, dtype=complex)
    return ThermalSimReport(
        channel=phi,
        delta_E_b_numeric=bath_energy_change(model, u, rho_in),
        unital_residual=unital_residual(phi) / 2,  # ||Phi(I/2) - I/2||
        u_total=u,
        model=model,
    )


def cutoff_sweep(p: SpinBosonParams, cutoffs: Sequence[int], rho_in: np.ndarray | None = None) -> list[float]:
    return [simulate_thermal_operation(replace(p, fock_cutoff=c), rho_in).delta_E_b_numeric for c in cutoffs]


def converged_delta_E_b(p: SpinBosonParams, start: int = 8, rel_tol: float = 1e-6, max_cutoff: int = 64,
                        rho_in: np.ndarray | None = None) -> tuple[float, int, float]:
    """Double the cutoff until ``delta_E_b`` changes by less than ``rel_tol`` (relative).

    Returns ``(value, cutoff, previous value)``.
    """
    c = start
    prev = simulate_thermal_operation(replace(p, fock_cutoff=c), rho_in).delta_E_b_numeric
    while 2 * c <= max_cutoff:
        c *= 2
        cur = simulate_thermal_operation(replace(p, fock_cutoff=c), rho_in).delta_E_b_numeric
        if abs(cur - prev) <= rel_tol * max(abs(cur), 1e-300):
            return cur, c, prev
        prev = cur
    raise ParameterError(f"delta_E_b not converged up to cutoff {c}")


def delta_E_b_spectral(j: SpectralDensity, tau: float) -> float:
    """Trapezoidal ``int J(w) (sin(w tau/2)/(w/2))^2 dw``; the kernel tends to ``tau^2`` at 0."""
    w = j.omega
    kernel = (tau * _sinc(w * tau / 2)) ** 2
    return float(trapezoid(j.values * kernel, w))


def spinboson_bound_report(p: SpinBosonParams, ens: MeasuredEnsemble,
                           slack: float = BOUND_SLACK) -> SpinBosonBoundReport:
    """``dS >= L_otm >= 0 >= -beta dE_b`` for a qubit ensemble under the dephasing channel."""
    if ens.dim != 2:
        raise ParameterError("spin-boson ensembles live on a qubit")
    rho_in = ens.state()
    sim = simulate_thermal_operation(p, rho_in)
    otm = jarzynski_report(ens, sim.channel)
    h_s = (p.omega0 / 2) * SIGMA_Z
    rho_out = apply(sim.channel, rho_in)
    delta_E_s = float(np.real(np.trace(rho_out @ h_s) - np.trace(rho_in @ h_s)))
    exergy = delta_E_s - otm.delta_S / p.beta
    exergy_ub = delta_E_s + math.log(otm.rhs) / p.beta
    mbe = -p.beta * sim.delta_E_b_numeric
    chain = [otm.delta_S - otm.l_otm, otm.l_otm, -mbe, exergy_ub - exergy]
    return SpinBosonBoundReport(
        delta_S=otm.delta_S, l_otm=otm.l_otm, minus_beta_delta_E_b=mbe,
        minus_beta_delta_E_b_analytic=-p.beta * delta_E_b_analytic(p),
        delta_E_s=delta_E_s, exergy=exergy, exergy_ub=exergy_ub,
        chain_ok=all(s >= -slack for s in chain),
    )


def ohmic_density(omega: np.ndarray, alpha: float, cutoff: float, s: float = 1.0) -> SpectralDensity:
    """``alpha w^s exp(-w/cutoff)`` sampled on ``omega``."""
    omega = np.asarray(omega, dtype=float)
    return SpectralDensity(omega, alpha * omega**s * np.exp(-omega / cutoff))


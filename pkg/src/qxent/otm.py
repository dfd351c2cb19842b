"""One-time-measurement information production.

A projective measurement prepares ``rho_in = sum_i p_i |p_i><p_i|``; the
channel's output ``rho_out`` then assigns each outcome the value
``sigma_i = C(Phi(|p_i><p_i|), rho_out) + ln p_i``.  The average of sigma is
the entropy change ``S(rho_out) - S(rho_in)`` and the exponential average
equals ``sum_i exp(-C(Phi(|p_i><p_i|), rho_out))``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import matcore as mc
from .channels import Channel, apply, unital_residual
from .entropy import SUPPORT_TOL, cross_entropy, support_leak, von_neumann
from .errors import DimensionError, InvariantViolation, ParameterError

BOUND_SLACK = 1e-9


@dataclass(frozen=True)
class MeasuredEnsemble:
    """Post-measurement kets (columns of ``kets``) with outcome probabilities."""

    probs: np.ndarray
    kets: np.ndarray

    def __post_init__(self):
        probs = np.asarray(self.probs, dtype=float).reshape(-1)
        kets = np.asarray(self.kets, dtype=complex)
        if kets.ndim != 2 or kets.shape[1] != probs.size:
            raise DimensionError("need one ket column per probability")
        if np.any(probs <= 0) or np.any(probs > 1 + mc.EPS_NUM):
            raise ParameterError("probabilities must lie in (0, 1]")
        if abs(probs.sum() - 1.0) > mc.EPS_NUM * max(probs.size, 1):
            raise ParameterError("probabilities must sum to one")
        gram = kets.conj().T @ kets
        if np.linalg.norm(gram - np.eye(probs.size)) > mc.EPS_NUM * kets.shape[0]:
            raise ParameterError("kets must be orthonormal")
        object.__setattr__(self, "probs", probs)
        object.__setattr__(self, "kets", kets)

    @property
    def dim(self) -> int:
        return self.kets.shape[0]

    @property
    def rank(self) -> int:
        return self.probs.size

    def projectors(self) -> list[np.ndarray]:
        return [mc.projector(self.kets[:, i]) for i in range(self.rank)]

    def state(self) -> np.ndarray:
        return (self.kets * self.probs) @ self.kets.conj().T


@dataclass(frozen=True)
class SigmaDistribution:
    weights: np.ndarray
    sigmas: np.ndarray
    cross_entropies: np.ndarray

    def mean(self) -> float:
        return float(np.dot(self.weights, self.sigmas))

    def exp_mean(self) -> float:
        """``<exp(-sigma)>`` over the atoms."""
        return float(np.dot(self.weights, np.exp(-self.sigmas)))


@dataclass(frozen=True)
class OtmReport:
    delta_S: float
    mean_sigma: float
    lhs: float
    rhs: float
    l_otm: float
    unital: bool
    bound_ok: bool
    identity_residual: float
    mean_residual: float
    bound_slack: float
    unital_residual: float
    max_support_leak: float


def prepare_input(rho0: np.ndarray, basis, rank_tol: float = mc.RANK_TOL) -> MeasuredEnsemble:
    """Measure ``rho0`` in an orthonormal basis and keep outcomes with ``p_i > rank_tol``.

    ``basis`` is an :class:`EigenSystem` of the observable or a unitary whose
    columns are the measurement kets.
    """
    vecs = basis.vectors if isinstance(basis, mc.EigenSystem) else np.asarray(basis, dtype=complex)
    rho0 = np.asarray(rho0, dtype=complex)
    d = rho0.shape[0]
    if vecs.shape != (d, d):
        raise DimensionError("measurement basis must span the state's space")
    if np.linalg.norm(vecs.conj().T @ vecs - np.eye(d)) > mc.EPS_NUM * d:
        raise ParameterError("measurement basis is not orthonormal")
    p = np.real(np.einsum("ji,jk,ki->i", vecs.conj(), rho0, vecs))
    keep = p > rank_tol
    probs = p[keep] / p[keep].sum()
    return MeasuredEnsemble(probs, vecs[:, keep])


def spectral_ensemble(rho: np.ndarray, rank_tol: float = mc.RANK_TOL) -> MeasuredEnsemble:
    """Ensemble from measuring ``rho`` in its own eigenbasis."""
    return prepare_input(rho, mc.eig_hermitian(rho), rank_tol)


def random_ensemble(d: int, r: int, seed: mc.SeedLike = None) -> MeasuredEnsemble:
    """Rank-``r`` ensemble on ``d`` dims: Haar kets, exponential weights."""
    if not 1 <= r <= d:
        raise ParameterError(f"rank {r} outside [1, {d}]")
    rng = np.random.default_rng(seed)
    p = rng.exponential(size=r)
    p /= p.sum()
    u = mc.haar_unitary(d, rng.integers(2**63))
    return MeasuredEnsemble(p, u[:, :r])


def _check_channel(ens: MeasuredEnsemble, phi: Channel) -> None:
    if phi.d_in != ens.dim:
        raise DimensionError(f"channel input {phi.d_in} does not match ensemble dim {ens.dim}")


def channel_outputs(ens: MeasuredEnsemble, phi: Channel) -> tuple[list[np.ndarray], np.ndarray]:
    """``Phi(|p_i><p_i|)`` for every outcome and ``rho_out`` computed once from ``rho_in``."""
    _check_channel(ens, phi)
    outs = [apply(phi, proj) for proj in ens.projectors()]
    rho_out = apply(phi, ens.state())
    return outs, rho_out


def sigma_distribution(ens: MeasuredEnsemble, phi: Channel,
                       support_tol: float = SUPPORT_TOL) -> SigmaDistribution:
    outs, rho_out = channel_outputs(ens, phi)
    cross = np.array([cross_entropy(o, rho_out, support_tol) for o in outs])
    if not np.all(np.isfinite(cross)):
        leaks = [support_leak(o, rho_out) for o in outs]
        raise InvariantViolation(f"output leaves the support of rho_out (leaks {leaks})")
    return SigmaDistribution(weights=ens.probs.copy(), sigmas=cross + np.log(ens.probs),
                             cross_entropies=cross)


def transition_probabilities(ens: MeasuredEnsemble, phi: Channel,
                             rank_tol: float = mc.RANK_TOL) -> tuple[np.ndarray, mc.EigenSystem]:
    """``P[i, j] = <q_j| Phi(|p_i><p_i|) |q_j>`` over the support eigenbasis of ``rho_out``.

    Returns the ``r x r'`` matrix and the support eigensystem ``{q_j, |q_j>}``.
    """
    outs, rho_out = channel_outputs(ens, phi)
    out_es = mc.support_eigensystem(rho_out, rank_tol)
    q = out_es.vectors
    P = np.array([np.real(np.einsum("ji,jk,ki->i", q.conj(), o, q)) for o in outs])
    return P, out_es


def sigma_from_transitions(ens: MeasuredEnsemble, P: np.ndarray, q_values: np.ndarray) -> np.ndarray:
    """Conditional expectation ``sum_j P(j|i)(-ln q_j + ln p_i)``."""
    return P @ (-np.log(q_values)) + np.log(ens.probs) * P.sum(axis=1)


def jarzynski_report(ens: MeasuredEnsemble, phi: Channel, slack: float = BOUND_SLACK,
                     support_tol: float = SUPPORT_TOL) -> OtmReport:
    """Both sides of the exponential identity, the bound and the unital refinement.

    The right-hand side is summed straight from cross entropies, never from
    the sigma atoms, so the identity is checked along two separate paths.
    """
    dist = sigma_distribution(ens, phi, support_tol)
    outs, rho_out = channel_outputs(ens, phi)
    rhs = float(sum(math.exp(-cross_entropy(o, rho_out, support_tol)) for o in outs))
    lhs = float(np.sum(ens.probs * np.exp(-dist.sigmas)))
    l_otm = -math.log(rhs)
    delta_S = von_neumann(rho_out) - von_neumann(ens.state())
    mean_sigma = dist.mean()
    un_res = unital_residual(phi)
    unital = un_res <= mc.EPS_NUM * max(phi.d_in, phi.d_out)
    bound_slack = delta_S - l_otm
    bound_ok = bound_slack >= -slack
    if unital:
        bound_ok = bound_ok and l_otm >= -slack
    leak = max(support_leak(o, rho_out) for o in outs)
    return OtmReport(
        delta_S=delta_S,
        mean_sigma=mean_sigma,
        lhs=lhs,
        rhs=rhs,
        l_otm=l_otm,
        unital=unital,
        bound_ok=bound_ok,
        identity_residual=abs(lhs - rhs),
        mean_residual=abs(mean_sigma - delta_S),
        bound_slack=bound_slack,
        unital_residual=un_res,
        max_support_leak=leak,
    )

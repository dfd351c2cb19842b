"""Quantum autoencoder: compression, cross-entropy bounds and training.

The encoder ``U`` acts on ``A (x) B``; ``A`` is the latent register kept
after compression and ``B`` is replaced by a fresh state before decoding
with ``U^dagger``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import matcore as mc
from .channels import Channel, QaeSpec, apply, qae_channel
from .entropy import cross_entropy, fidelity, holevo, von_neumann
from .errors import DimensionError, ParameterError
from .optimize import CountingObjective, coordinate_descent, fd_gradient_descent, fourier_coordinate_descent
from .otm import BOUND_SLACK, MeasuredEnsemble, channel_outputs, jarzynski_report


@dataclass(frozen=True)
class BoundChainReport:
    l_otm: float
    delta_S: float
    s_eta: float
    ln_dF: float
    ub_cost: float
    cost: float
    araki_lieb_slack: float
    overlap_slack: float
    chain_ok: bool

    @property
    def slacks(self) -> dict[str, float]:
        return {
            "delta_S - l_otm": self.delta_S - self.l_otm,
            "s_eta - delta_S": self.s_eta - self.delta_S,
            "ln_dF - s_eta": self.ln_dF - self.s_eta,
            "ub_cost - ln_dF": self.ub_cost - self.ln_dF,
        }


@dataclass(frozen=True)
class DisturbanceReport:
    delta_chi: float
    ub_general: float
    ub_qae: float | None = None
    closed_form: float | None = None
    independence_residual: float | None = None


@dataclass(frozen=True)
class QaeReport:
    l_otm: float
    delta_S: float
    cost: float
    ub_cost: float
    delta_chi: float
    delta_chi_ub: float
    fresh_entropy: float
    compressed_entropies: tuple[float, ...]
    chain: BoundChainReport


def _check_dims(u: np.ndarray, ens: MeasuredEnsemble, dims: tuple[int, int]) -> None:
    d = dims[0] * dims[1]
    if np.shape(u) != (d, d) or ens.dim != d:
        raise DimensionError(f"encoder/ensemble do not live on {dims[0]}x{dims[1]}")


def compressed_states(u: np.ndarray, ens: MeasuredEnsemble, dims: tuple[int, int]):
    """``rho_A = Tr_B[U rho_in U^dagger]`` and ``rho_A^(i) = Tr_B[U |p_i><p_i| U^dagger]``."""
    _check_dims(u, ens, dims)
    u = np.asarray(u, dtype=complex)
    rho_a = mc.partial_trace(u @ ens.state() @ u.conj().T, dims, keep="A")
    parts = [mc.partial_trace(u @ proj @ u.conj().T, dims, keep="A") for proj in ens.projectors()]
    return rho_a, parts


def qae_l_otm(spec: QaeSpec, ens: MeasuredEnsemble) -> tuple[float, dict[str, float]]:
    """``S(rho_B) - ln sum_i exp(-C(rho_A^(i), rho_A))`` with its two terms."""
    rho_a, parts = compressed_states(spec.u, ens, spec.dims)
    s_fresh = von_neumann(spec.rho_b)
    latent_sum = sum(math.exp(-cross_entropy(p, rho_a)) for p in parts)
    latent = -math.log(latent_sum)
    return s_fresh + latent, {"fresh_entropy": s_fresh, "latent_term": latent, "latent_sum": latent_sum}


def global_cost(u: np.ndarray, psi: np.ndarray, rho_in: np.ndarray, dims: tuple[int, int]) -> float:
    """``1 - <psi| Tr_A[U rho_in U^dagger] |psi>``."""
    u = np.asarray(u, dtype=complex)
    psi = np.asarray(psi, dtype=complex).reshape(-1)
    d = dims[0] * dims[1]
    if u.shape != (d, d) or np.shape(rho_in) != (d, d) or psi.size != dims[1]:
        raise DimensionError("cost inputs do not match dims")
    eta_b = mc.partial_trace(u @ rho_in @ u.conj().T, dims, keep="B")
    return float(1.0 - np.real(psi.conj() @ eta_b @ psi))


def _cost_root(cost: float, d_b: int) -> float:
    # cost may sit a rounding error outside [0, 1]
    cost = min(max(cost, 0.0), 1.0)
    return math.sqrt(1.0 - cost) + math.sqrt((d_b - 1) * cost)


def cost_upper_bound(cost: float, d_b: int) -> float:
    """``2 ln(sqrt(1 - C) + sqrt((d_B - 1) C))``."""
    return 2.0 * math.log(_cost_root(cost, d_b))


def fresh_ket(spec: QaeSpec) -> np.ndarray:
    """The pure fresh state as a ket; raises if ``rho_B`` is mixed."""
    w, v = mc.eig_hermitian(spec.rho_b)
    if abs(w[0] - 1.0) > 1e-9:
        raise ParameterError("the cost bound needs a pure fresh state")
    return v[:, 0]


def _complete_basis(cols: np.ndarray) -> np.ndarray:
    # extend orthonormal columns to a unitary, deterministically
    d, r = cols.shape
    q, _ = np.linalg.qr(np.hstack([cols, np.eye(d, dtype=complex)]))
    q = q[:, :d]
    q[:, :r] = cols
    return q


def disentangling_unitary(ens: MeasuredEnsemble, dims: tuple[int, int], psi: np.ndarray | None = None
                          ) -> np.ndarray:
    """Encoder sending ``|p_i>`` to ``|i>_A (x) |psi>_B``; needs rank <= d_A."""
    d_a, d_b = dims
    if ens.dim != d_a * d_b:
        raise DimensionError("ensemble does not live on the registers")
    if ens.rank > d_a:
        raise ParameterError("rank exceeds the latent dimension; no disentangling encoder exists")
    psi = mc.ket(0, d_b) if psi is None else np.asarray(psi, dtype=complex).reshape(-1)
    targets = np.stack([np.kron(mc.ket(i, d_a), psi) for i in range(ens.rank)], axis=1)
    return _complete_basis(targets) @ _complete_basis(ens.kets).conj().T


def bound_chain(spec: QaeSpec, ens: MeasuredEnsemble, slack: float = BOUND_SLACK) -> BoundChainReport:
    """``L_otm <= dS <= S(eta_B) <= ln(d_B F[eta_B, I/d_B]) <= 2 ln(...)``."""
    psi = fresh_ket(spec)
    dims = spec.dims
    u = spec.u
    rho_in = ens.state()
    l_otm, terms = qae_l_otm(spec, ens)
    rho_out = apply(qae_channel(spec), rho_in)
    delta_S = von_neumann(rho_out) - von_neumann(rho_in)
    encoded = u @ rho_in @ u.conj().T
    eta_b = mc.partial_trace(encoded, dims, keep="B")
    rho_a = mc.partial_trace(encoded, dims, keep="A")
    s_eta = von_neumann(eta_b)
    f = fidelity(eta_b, np.eye(spec.d_b) / spec.d_b)
    ln_dF = math.log(spec.d_b * f)
    cost = global_cost(u, psi, rho_in, dims)
    ub = cost_upper_bound(cost, spec.d_b)
    araki = von_neumann(encoded) - abs(von_neumann(rho_a) - s_eta)
    overlap = terms["latent_sum"] - _cost_root(cost, spec.d_b) ** -2
    chain = [delta_S - l_otm, s_eta - delta_S, ln_dF - s_eta, ub - ln_dF, araki, overlap]
    return BoundChainReport(
        l_otm=l_otm, delta_S=delta_S, s_eta=s_eta, ln_dF=ln_dF, ub_cost=ub, cost=cost,
        araki_lieb_slack=araki, overlap_slack=overlap,
        chain_ok=all(s >= -slack for s in chain),
    )


def _holevo_loss(ens: MeasuredEnsemble, outs: list[np.ndarray]) -> float:
    before = holevo([(p, proj) for p, proj in zip(ens.probs, ens.projectors())])
    after = holevo(list(zip(ens.probs, outs)))
    return before - after


def entropic_disturbance(ens: MeasuredEnsemble, phi: Channel, alt_fresh: np.ndarray | None = None
                         ) -> DisturbanceReport:
    """Loss of Holevo information and its cross-entropy upper bound.

    For autoencoder channels the specialized bound, the closed form in terms
    of compressed states, and the change of the loss under a second fresh
    state ``alt_fresh`` (default ``I/d_B``, or ``|0><0|`` when the channel
    already uses ``I/d_B``) are reported too.
    """
    outs, rho_out = channel_outputs(ens, phi)
    delta_chi = _holevo_loss(ens, outs)
    ub_general = math.log(sum(math.exp(-cross_entropy(o, rho_out)) for o in outs)) + float(
        np.dot(ens.probs, [von_neumann(o) for o in outs]))
    spec = getattr(phi, "meta", {}).get("qae_spec")
    if spec is None:
        return DisturbanceReport(delta_chi=delta_chi, ub_general=ub_general)

    rho_a, parts = compressed_states(spec.u, ens, spec.dims)
    s_parts = np.array([von_neumann(p) for p in parts])
    ub_qae = float(np.dot(ens.probs, s_parts)) + math.log(
        sum(math.exp(-cross_entropy(p, rho_a)) for p in parts))
    closed = von_neumann(ens.state()) - von_neumann(rho_a) + float(np.dot(ens.probs, s_parts))
    if alt_fresh is None:
        mixed = np.eye(spec.d_b, dtype=complex) / spec.d_b
        alt_fresh = mixed if np.linalg.norm(spec.rho_b - mixed) > 1e-9 else mc.projector(mc.ket(0, spec.d_b))
    alt = QaeSpec(spec.d_a, spec.d_b, spec.u, alt_fresh)
    alt_outs, _ = channel_outputs(ens, qae_channel(alt))
    residual = abs(delta_chi - _holevo_loss(ens, alt_outs))
    return DisturbanceReport(delta_chi=delta_chi, ub_general=ub_general, ub_qae=ub_qae,
                             closed_form=closed, independence_residual=residual)


# --------------------------------------------------------------------------
# variational circuit

def _embedded_rotation(d: int, k: int, axis: str, theta: float) -> np.ndarray:
    g = np.eye(d, dtype=complex)
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    if axis == "y":
        g[k, k], g[k, k + 1], g[k + 1, k], g[k + 1, k + 1] = c, -s, s, c
    else:
        g[k, k], g[k + 1, k + 1] = complex(c, -s), complex(c, s)
    return g


def controlled_shift(d_a: int, d_b: int) -> np.ndarray:
    """``|a, b> -> |a, (a + b) mod d_B>``; CNOT for two qubits."""
    d = d_a * d_b
    perm = np.zeros((d, d), dtype=complex)
    for a in range(d_a):
        for b in range(d_b):
            perm[a * d_b + (a + b) % d_b, a * d_b + b] = 1.0
    return perm


@dataclass(frozen=True)
class Ansatz:
    """Layers of per-register Y/Z rotations, each followed by a controlled shift.

    Each register of dimension ``d`` gets Y and Z rotations embedded on the
    level pairs ``(k, k+1)``; for qubits that is one RY and one RZ.
    """

    d_a: int = 2
    d_b: int = 2
    layers: int = 4

    @property
    def params_per_layer(self) -> int:
        return 2 * (self.d_a - 1) + 2 * (self.d_b - 1)

    @property
    def n_params(self) -> int:
        return self.layers * self.params_per_layer

    @property
    def period(self) -> float:
        # a qubit rotation by 2*pi is a global sign; embedded ones are not
        return 2 * math.pi if self.d_a == self.d_b == 2 else 4 * math.pi

    def _register(self, d: int, theta: np.ndarray) -> np.ndarray:
        g = np.eye(d, dtype=complex)
        for k in range(d - 1):
            g = _embedded_rotation(d, k, "y", theta[2 * k]) @ g
            g = _embedded_rotation(d, k, "z", theta[2 * k + 1]) @ g
        return g

    def build(self, theta: np.ndarray) -> np.ndarray:
        theta = np.asarray(theta, dtype=float)
        if theta.size != self.n_params:
            raise ParameterError(f"expected {self.n_params} parameters, got {theta.size}")
        ent = controlled_shift(self.d_a, self.d_b)
        u = np.eye(self.d_a * self.d_b, dtype=complex)
        na = 2 * (self.d_a - 1)
        for layer in theta.reshape(self.layers, self.params_per_layer):
            local = np.kron(self._register(self.d_a, layer[:na]), self._register(self.d_b, layer[na:]))
            u = ent @ local @ u
        return u


@dataclass(frozen=True)
class TrainOptions:
    max_evals: int = 5000
    tol: float = 1e-10
    seed: int = 0
    method: str = "fourier"
    line_tol: float = 1e-6
    grid: int = 8
    fd_step: float = 1e-4
    rel_stall: float = 1e-2
    restart_below: float = 1e-8


@dataclass(frozen=True)
class TrainResult:
    theta: np.ndarray
    cost: float
    trace: list[float] = field(repr=False)
    n_evals: int
    report: QaeReport


def qae_report(spec: QaeSpec, ens: MeasuredEnsemble) -> QaeReport:
    chain = bound_chain(spec, ens)
    phi = qae_channel(spec)
    dist = entropic_disturbance(ens, phi)
    _, parts = compressed_states(spec.u, ens, spec.dims)
    return QaeReport(
        l_otm=chain.l_otm, delta_S=chain.delta_S, cost=chain.cost, ub_cost=chain.ub_cost,
        delta_chi=dist.delta_chi, delta_chi_ub=dist.ub_qae,
        fresh_entropy=von_neumann(spec.rho_b),
        compressed_entropies=tuple(von_neumann(p) for p in parts),
        chain=chain,
    )


def train(ens: MeasuredEnsemble, ansatz: Ansatz, opt: TrainOptions = TrainOptions(),
          psi: np.ndarray | None = None) -> TrainResult:
    """Minimize the global cost over the ansatz parameters.

    ``psi`` is the pure fresh state (default ``|0>`` on B).  The returned
    ``trace`` is the best cost seen after each evaluation.
    """
    dims = (ansatz.d_a, ansatz.d_b)
    if ens.dim != ansatz.d_a * ansatz.d_b:
        raise DimensionError("ensemble does not live on the ansatz registers")
    psi = mc.ket(0, ansatz.d_b) if psi is None else np.asarray(psi, dtype=complex)
    rho_in = ens.state()
    obj = CountingObjective(lambda th: global_cost(ansatz.build(th), psi, rho_in, dims),
                            max_evals=opt.max_evals)
    rng = np.random.default_rng(opt.seed)
    x0 = rng.uniform(-ansatz.period / 2, ansatz.period / 2, size=ansatz.n_params)
    if opt.method == "fourier":
        # restart from a fresh random point whenever progress stalls above restart_below
        while True:
            fourier_coordinate_descent(obj, x0, period=ansatz.period,
                                       harmonics=int(round(ansatz.period / (2 * math.pi))), tol=opt.tol,
                                       rel_stall=opt.rel_stall)
            if obj.n_evals >= opt.max_evals or obj.best_f <= opt.restart_below:
                break
            x0 = rng.uniform(-ansatz.period / 2, ansatz.period / 2, size=ansatz.n_params)
    elif opt.method == "coordinate":
        coordinate_descent(obj, x0, period=ansatz.period, grid=opt.grid, line_tol=opt.line_tol, tol=opt.tol)
    elif opt.method == "fdgrad":
        fd_gradient_descent(obj, x0, fd_step=opt.fd_step, tol=opt.tol)
    else:
        raise ParameterError(f"unknown optimizer {opt.method!r}")
    theta = obj.best_x
    spec = QaeSpec(ansatz.d_a, ansatz.d_b, ansatz.build(theta), mc.projector(psi))
    return TrainResult(theta=theta, cost=obj.best_f, trace=list(obj.trace), n_evals=obj.n_evals,
                       report=qae_report(spec, ens))


def generic_l_otm(spec: QaeSpec, ens: MeasuredEnsemble) -> float:
    """L_otm of the autoencoder channel through the general OTM route."""
    return jarzynski_report(ens, qae_channel(spec)).l_otm

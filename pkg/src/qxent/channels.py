"""Quantum channels: Kraus lists, formula-backed maps and their constructors."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import matcore as mc
from .errors import DimensionError, ParameterError, UnitarityError


@dataclass(frozen=True)
class KrausChannel:
    ops: tuple[np.ndarray, ...]
    name: str = "kraus"

    def __post_init__(self):
        ops = tuple(np.asarray(k, dtype=complex) for k in self.ops)
        if not ops:
            raise ParameterError("a Kraus channel needs at least one operator")
        shape = ops[0].shape
        if any(k.shape != shape for k in ops):
            raise DimensionError("Kraus operators must share one shape")
        object.__setattr__(self, "ops", ops)

    @property
    def d_in(self) -> int:
        return self.ops[0].shape[1]

    @property
    def d_out(self) -> int:
        return self.ops[0].shape[0]

    def __call__(self, rho: np.ndarray) -> np.ndarray:
        return sum(k @ rho @ k.conj().T for k in self.ops)


@dataclass(frozen=True)
class MapChannel:
    """A channel given by a formula rather than a Kraus list."""

    fn: Callable[[np.ndarray], np.ndarray]
    d_in: int
    d_out: int
    name: str = "map"
    meta: dict = field(default_factory=dict, compare=False)

    def __call__(self, rho: np.ndarray) -> np.ndarray:
        return self.fn(rho)


Channel = KrausChannel | MapChannel


@dataclass(frozen=True)
class ChannelReport:
    trace_preserving: bool
    unital: bool
    tp_residual: float
    unital_residual: float


@dataclass(frozen=True)
class QaeSpec:
    """Autoencoder data: encoder ``u`` on ``d_a * d_b`` and the fresh state ``rho_b``."""

    d_a: int
    d_b: int
    u: np.ndarray
    rho_b: np.ndarray

    def __post_init__(self):
        u = np.asarray(self.u, dtype=complex)
        rho_b = np.asarray(self.rho_b, dtype=complex)
        d = self.d_a * self.d_b
        if u.shape != (d, d):
            raise DimensionError(f"encoder shape {u.shape} does not match {d}")
        if rho_b.shape != (self.d_b, self.d_b):
            raise DimensionError("fresh state has the wrong dimension")
        if mc.unitarity_residual(u) > mc.EPS_NUM * d:
            raise UnitarityError("encoder is not unitary")
        mc.check_density(rho_b)
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "rho_b", rho_b)

    @property
    def dims(self) -> tuple[int, int]:
        return (self.d_a, self.d_b)

    @property
    def dim(self) -> int:
        return self.d_a * self.d_b


def _dims_of(channel) -> tuple[int, int]:
    return channel.d_in, channel.d_out


def apply(channel: Channel, rho: np.ndarray, check: bool = False) -> np.ndarray:
    """Send ``rho`` through ``channel``; with ``check`` the output is validated."""
    rho = np.asarray(rho, dtype=complex)
    d_in, _ = _dims_of(channel)
    if rho.shape != (d_in, d_in):
        raise DimensionError(f"state of shape {rho.shape} does not fit channel input {d_in}")
    out = mc.hermitianize(channel(rho))
    if check:
        mc.check_density(out)
    return out


def choi_matrix(channel: Channel) -> np.ndarray:
    """``sum_ij |i><j| (x) Phi(|i><j|)`` on ``d_in * d_out``."""
    d_in, d_out = _dims_of(channel)
    choi = np.zeros((d_in * d_out, d_in * d_out), dtype=complex)
    for i in range(d_in):
        for j in range(d_in):
            e = np.zeros((d_in, d_in), dtype=complex)
            e[i, j] = 1.0
            choi[i * d_out:(i + 1) * d_out, j * d_out:(j + 1) * d_out] = channel(e)
    return choi


def kraus_from_choi(choi: np.ndarray, d_in: int, d_out: int, tol: float = 1e-12) -> KrausChannel:
    w, v = mc.eig_hermitian(choi)
    ops = []
    for lam, vec in zip(w, v.T):
        if lam <= tol:
            continue
        # vec[i*d_out + a] = <i|(x)<a| ; K[a, i] = sqrt(lam) * vec[i, a]
        ops.append(np.sqrt(lam) * vec.reshape(d_in, d_out).T)
    return KrausChannel(tuple(ops), name="choi")


def to_kraus(channel: Channel) -> KrausChannel:
    if isinstance(channel, KrausChannel):
        return channel
    return kraus_from_choi(choi_matrix(channel), channel.d_in, channel.d_out)


def unital_residual(channel: Channel) -> float:
    """``||Phi(I) - I||_F``; infinite when input and output dimensions differ."""
    d_in, d_out = _dims_of(channel)
    if d_in != d_out:
        return float("inf")
    return float(np.linalg.norm(channel(np.eye(d_in, dtype=complex)) - np.eye(d_out)))


def trace_preserving_residual(channel: Channel) -> float:
    k = to_kraus(channel)
    s = sum(op.conj().T @ op for op in k.ops)
    return float(np.linalg.norm(s - np.eye(k.d_in)))


def validate(channel: Channel) -> ChannelReport:
    d = max(_dims_of(channel))
    tp = trace_preserving_residual(channel)
    un = unital_residual(channel)
    return ChannelReport(
        trace_preserving=tp <= mc.EPS_NUM * d,
        unital=un <= mc.EPS_NUM * d,
        tp_residual=tp,
        unital_residual=un,
    )


# --------------------------------------------------------------------------
# constructors

def identity_channel(d: int) -> KrausChannel:
    return KrausChannel((np.eye(d, dtype=complex),), name="identity")


def unitary_channel(u: np.ndarray) -> KrausChannel:
    u = np.asarray(u, dtype=complex)
    if mc.unitarity_residual(u) > mc.EPS_NUM * u.shape[0]:
        raise UnitarityError("operator is not unitary")
    return KrausChannel((u,), name="unitary")


def depolarizing_channel(d: int) -> MapChannel:
    """Completely depolarizing channel, ``rho -> Tr(rho) I/d``."""
    eye = np.eye(d, dtype=complex) / d
    return MapChannel(lambda rho: np.trace(rho) * eye, d, d, name="depolarizing")


def amplitude_damping(gamma: float) -> KrausChannel:
    if not 0.0 <= gamma <= 1.0:
        raise ParameterError("gamma must lie in [0, 1]")
    k0 = np.array([[1.0, 0.0], [0.0, np.sqrt(1.0 - gamma)]], dtype=complex)
    k1 = np.array([[0.0, np.sqrt(gamma)], [0.0, 0.0]], dtype=complex)
    return KrausChannel((k0, k1), name="amplitude-damping")


def random_channel(d: int, n_ops: int, seed: mc.SeedLike = None) -> KrausChannel:
    return KrausChannel(tuple(mc.random_kraus_ops(d, n_ops, seed)), name="random")


def random_unitary_mixture(d: int, n_terms: int, seed: mc.SeedLike = None) -> KrausChannel:
    """Unital channel ``sum_k q_k U_k rho U_k^dagger`` with Haar ``U_k``."""
    rng = np.random.default_rng(seed)
    q = rng.exponential(size=n_terms)
    q /= q.sum()
    ops = tuple(np.sqrt(qk) * mc.haar_unitary(d, rng.integers(2**63)) for qk in q)
    return KrausChannel(ops, name="unitary-mixture")


def qae_output(spec: QaeSpec, rho: np.ndarray) -> np.ndarray:
    """``U^dagger (Tr_B[U rho U^dagger] (x) rho_B) U``."""
    u = spec.u
    latent = mc.partial_trace(u @ rho @ u.conj().T, spec.dims, keep="A")
    return u.conj().T @ np.kron(latent, spec.rho_b) @ u


def qae_channel(spec: QaeSpec) -> MapChannel:
    return MapChannel(lambda rho: qae_output(spec, rho), spec.dim, spec.dim, name="qae",
                      meta={"qae_spec": spec})


def thermal_operation(u_total: np.ndarray, rho_bath: np.ndarray, dims: tuple[int, int]) -> MapChannel:
    """``rho -> Tr_b[U (rho (x) rho_bath) U^dagger]`` on the system factor."""
    d_s, d_b = dims
    u_total = np.asarray(u_total, dtype=complex)
    rho_bath = np.asarray(rho_bath, dtype=complex)
    if u_total.shape != (d_s * d_b, d_s * d_b) or rho_bath.shape != (d_b, d_b):
        raise DimensionError("unitary or bath state does not match dims")
    if mc.unitarity_residual(u_total) > mc.EPS_NUM * d_s * d_b:
        raise UnitarityError("total evolution is not unitary")

    def fn(rho):
        joint = u_total @ np.kron(rho, rho_bath) @ u_total.conj().T
        return mc.partial_trace(joint, dims, keep="A")

    return MapChannel(fn, d_s, d_s, name="thermal-operation",
                      meta={"u_total": u_total, "rho_bath": rho_bath, "dims": dims})


def compose(*channels: Channel) -> MapChannel:
    """``compose(a, b)(rho) == b(a(rho))``."""
    for first, second in zip(channels, channels[1:]):
        if first.d_out != second.d_in:
            raise DimensionError("channel dimensions do not chain")

    def fn(rho):
        for ch in channels:
            rho = ch(rho)
        return rho

    return MapChannel(fn, channels[0].d_in, channels[-1].d_out, name="composite")


def from_kraus(ops: Sequence[np.ndarray]) -> KrausChannel:
    return KrausChannel(tuple(ops))

"""Dense complex linear algebra used by every other module.

Matrices are plain ``numpy`` arrays of dtype ``complex128``.  Density
matrices are the same arrays, checked with :func:`check_density` where a
function needs the guarantee.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DimensionError, HermiticityError, ParameterError

EPS_NUM = 1e-10
EPS_PSD = 1e-10
RANK_TOL = 1e-10

SeedLike = int | Sequence[int] | np.random.SeedSequence | None


@dataclass(frozen=True)
class EigenSystem:
    """Eigenvalues in descending order and matching eigenvectors as columns."""

    values: np.ndarray
    vectors: np.ndarray

    def __iter__(self):
        return iter((self.values, self.vectors))

    def reconstruct(self) -> np.ndarray:
        return (self.vectors * self.values) @ self.vectors.conj().T


def dagger(a: np.ndarray) -> np.ndarray:
    return a.conj().T


def hermitianize(a: np.ndarray) -> np.ndarray:
    return 0.5 * (a + a.conj().T)


def ket(index: int, dim: int) -> np.ndarray:
    v = np.zeros(dim, dtype=complex)
    v[index] = 1.0
    return v


def projector(v: np.ndarray) -> np.ndarray:
    v = np.asarray(v, dtype=complex).reshape(-1)
    return np.outer(v, v.conj())


def is_hermitian(h: np.ndarray, tol: float = EPS_NUM) -> bool:
    h = np.asarray(h)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        return False
    scale = max(1.0, float(np.linalg.norm(h)))
    return float(np.linalg.norm(h - h.conj().T)) <= tol * scale


def check_hermitian(h: np.ndarray, tol: float = EPS_NUM) -> np.ndarray:
    h = np.asarray(h, dtype=complex)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {h.shape}")
    if not is_hermitian(h, tol):
        raise HermiticityError("matrix is not Hermitian within tolerance")
    return h


def density_residuals(rho: np.ndarray) -> dict[str, float]:
    """Hermiticity, trace and positivity defects of a candidate density matrix."""
    rho = np.asarray(rho, dtype=complex)
    evals = np.linalg.eigvalsh(hermitianize(rho))
    return {
        "hermiticity": float(np.linalg.norm(rho - rho.conj().T)),
        "trace": float(abs(np.trace(rho) - 1.0)),
        "min_eigenvalue": float(evals[0]),
    }


def is_density(rho: np.ndarray, tol: float = EPS_NUM, psd_tol: float = EPS_PSD) -> bool:
    rho = np.asarray(rho)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        return False
    res = density_residuals(rho)
    d = rho.shape[0]
    return (
        res["hermiticity"] <= tol * d
        and res["trace"] <= tol * d
        and res["min_eigenvalue"] >= -psd_tol * d
    )


def check_density(rho: np.ndarray, tol: float = EPS_NUM, psd_tol: float = EPS_PSD) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {rho.shape}")
    if not is_density(rho, tol, psd_tol):
        raise ParameterError(f"not a valid density matrix: {density_residuals(rho)}")
    return rho


def tensor(*mats: np.ndarray) -> np.ndarray:
    """Kronecker product of one or more matrices (or vectors)."""
    out = np.asarray(mats[0], dtype=complex)
    for m in mats[1:]:
        out = np.kron(out, np.asarray(m, dtype=complex))
    return out


def partial_trace(m: np.ndarray, dims: tuple[int, int], keep: str = "A") -> np.ndarray:
    """Reduced matrix of a bipartite operator on ``d_A * d_B``.

    ``keep`` is ``"A"`` (trace out B) or ``"B"`` (trace out A).
    """
    d_a, d_b = dims
    m = np.asarray(m, dtype=complex)
    if m.shape != (d_a * d_b, d_a * d_b):
        raise DimensionError(f"matrix of shape {m.shape} does not match dims {dims}")
    t = m.reshape(d_a, d_b, d_a, d_b)
    if keep == "A":
        return np.einsum("ibjb->ij", t)
    if keep == "B":
        return np.einsum("aiaj->ij", t)
    raise ParameterError(f"keep must be 'A' or 'B', not {keep!r}")


def _jacobi_eigh(h: np.ndarray, tol: float = 1e-14, max_sweeps: int = 100):
    """Cyclic Jacobi diagonalization of a complex Hermitian matrix."""
    a = np.array(h, dtype=complex)
    n = a.shape[0]
    v = np.eye(n, dtype=complex)
    scale = max(float(np.linalg.norm(a)), 1e-300)
    for _ in range(max_sweeps):
        # direct off-diagonal norm; the difference of squared norms cancels catastrophically
        off = float(np.linalg.norm(a - np.diag(np.diag(a))))
        if off <= tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                b = abs(a[p, q])
                if b <= 1e-300:
                    continue
                phase = a[p, q] / b
                theta = (a[q, q].real - a[p, p].real) / (2.0 * b)
                t = (1.0 if theta >= 0 else -1.0) / (abs(theta) + np.sqrt(theta * theta + 1.0))
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                g = np.array([[c, s], [-s * phase.conjugate(), c * phase.conjugate()]])
                idx = [p, q]
                a[:, idx] = a[:, idx] @ g
                a[idx, :] = g.conj().T @ a[idx, :]
                v[:, idx] = v[:, idx] @ g
    else:
        raise ArithmeticError("Jacobi iteration did not converge")
    return np.diag(a).real.copy(), v


def eig_hermitian(h: np.ndarray, method: str = "lapack") -> EigenSystem:
    """Full spectral decomposition of a Hermitian matrix, values descending.

    ``method="jacobi"`` uses a cyclic Jacobi sweep instead of LAPACK; both
    meet the same reconstruction contract.
    """
    h = hermitianize(check_hermitian(h))
    if method == "lapack":
        w, v = np.linalg.eigh(h)
    elif method == "jacobi":
        w, v = _jacobi_eigh(h)
    else:
        raise ParameterError(f"unknown eigensolver {method!r}")
    order = np.argsort(w, kind="stable")[::-1]
    return EigenSystem(values=np.asarray(w[order], dtype=float), vectors=v[:, order])


def support_eigensystem(rho: np.ndarray, rank_tol: float = RANK_TOL) -> EigenSystem:
    """Eigenpairs of ``rho`` whose eigenvalue exceeds ``rank_tol * lambda_max``."""
    es = eig_hermitian(rho)
    lam_max = es.values[0] if es.values.size else 0.0
    keep = es.values > rank_tol * max(lam_max, 0.0)
    return EigenSystem(values=es.values[keep], vectors=es.vectors[:, keep])


def matrix_function(h: np.ndarray, fn) -> np.ndarray:
    """Apply a scalar function to a Hermitian matrix through its spectrum."""
    w, v = eig_hermitian(h)
    return (v * fn(w)) @ v.conj().T


def log_on_support(rho: np.ndarray, rank_tol: float = RANK_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Matrix logarithm restricted to the support of ``rho`` and the support projector.

    Eigenvalues at or below ``rank_tol * lambda_max`` are treated as exact
    zeros and contribute nothing to the logarithm.
    """
    w, v = support_eigensystem(rho, rank_tol)
    log_rho = (v * np.log(w)) @ v.conj().T
    proj = v @ v.conj().T
    return log_rho, proj


def sqrtm_psd(rho: np.ndarray) -> np.ndarray:
    return matrix_function(rho, lambda w: np.sqrt(np.clip(w, 0.0, None)))


def propagator(h: np.ndarray, t: float) -> np.ndarray:
    """``exp(-i h t)`` for Hermitian ``h`` via the spectral decomposition."""
    w, v = eig_hermitian(h)
    return (v * np.exp(-1j * w * t)) @ v.conj().T


def unitarity_residual(u: np.ndarray) -> float:
    u = np.asarray(u)
    return float(np.linalg.norm(u.conj().T @ u - np.eye(u.shape[0])))


# --------------------------------------------------------------------------
# seeded random objects

def _rng(seed: SeedLike) -> np.random.Generator:
    return np.random.default_rng(seed)


def haar_unitary(d: int, seed: SeedLike = None) -> np.ndarray:
    """Haar-distributed unitary from the QR decomposition of a Ginibre matrix."""
    if d < 1:
        raise ParameterError("dimension must be positive")
    rng = _rng(seed)
    z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    diag = np.diag(r)
    return q * (diag / np.abs(diag))


def random_pure_state(d: int, seed: SeedLike = None) -> np.ndarray:
    return haar_unitary(d, seed)[:, 0]


def random_density(d: int, rank: int | None = None, seed: SeedLike = None) -> np.ndarray:
    """``U diag(p) U^dagger`` with Haar ``U`` and ``rank`` normalized exponential weights."""
    rank = d if rank is None else rank
    if d < 1 or not 1 <= rank <= d:
        raise ParameterError(f"invalid rank {rank} for dimension {d}")
    rng = _rng(seed)
    p = np.zeros(d)
    p[:rank] = rng.exponential(size=rank)
    p /= p.sum()
    u = haar_unitary(d, rng.integers(2**63))
    return hermitianize((u * p) @ u.conj().T)


def random_hermitian(d: int, seed: SeedLike = None, scale: float = 1.0) -> np.ndarray:
    rng = _rng(seed)
    z = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return scale * hermitianize(z)


def random_kraus_ops(d: int, n_ops: int, seed: SeedLike = None, d_out: int | None = None) -> list[np.ndarray]:
    """Kraus operators of a random channel from a Haar Stinespring dilation.

    A Haar unitary on ``d_out * n_ops`` acts on ``|input> (x) |0>_env`` and the
    environment is traced out; requires ``d <= d_out * n_ops``.
    """
    d_out = d if d_out is None else d_out
    if d < 1 or n_ops < 1 or d_out < 1:
        raise ParameterError("dimensions and operator count must be positive")
    big = d_out * n_ops
    if d > big:
        raise ParameterError("input dimension exceeds dilation dimension")
    v = haar_unitary(big, seed)[:, :d]  # isometry C^d -> C^{d_out} (x) C^{n_ops}
    t = v.reshape(d_out, n_ops, d)
    return [np.ascontiguousarray(t[:, j, :]) for j in range(n_ops)]


def sample_random(kind: str, dim: int, seed: SeedLike = None, *, rank: int | None = None, n_ops: int = 1):
    """Dispatch for the seeded samplers, keyed by ``kind``.

    ``kind`` is one of ``haar-unitary``, ``density``, ``pure-state`` or
    ``kraus-channel``.
    """
    if kind == "haar-unitary":
        return haar_unitary(dim, seed)
    if kind == "density":
        return random_density(dim, rank, seed)
    if kind == "pure-state":
        return random_pure_state(dim, seed)
    if kind == "kraus-channel":
        return random_kraus_ops(dim, n_ops, seed)
    raise ParameterError(f"unknown random kind {kind!r}")

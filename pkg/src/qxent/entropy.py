"""Entropies, cross entropy, Holevo information and fidelities (natural log).

An infinite cross or relative entropy is returned as ``math.inf``; callers
test finiteness with ``math.isfinite``.
"""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from . import matcore as mc
from .errors import DimensionError, ParameterError

SUPPORT_TOL = 1e-9


def _same_shape(a: np.ndarray, b: np.ndarray) -> None:
    if np.shape(a) != np.shape(b):
        raise DimensionError(f"shape mismatch {np.shape(a)} vs {np.shape(b)}")


def shannon(p: np.ndarray) -> float:
    p = np.asarray(p, dtype=float)
    p = p[p > 0]
    return float(-np.sum(p * np.log(p)))


def von_neumann(rho: np.ndarray) -> float:
    """``-Tr[rho ln rho]`` with ``0 ln 0 = 0``."""
    w = np.linalg.eigvalsh(mc.hermitianize(np.asarray(rho, dtype=complex)))
    w = w[w > mc.RANK_TOL * max(w[-1], 0.0)]
    return max(shannon(w), 0.0)


def support_leak(rho1: np.ndarray, rho2: np.ndarray, rank_tol: float = mc.RANK_TOL) -> float:
    """Mass of ``rho1`` on the null space of ``rho2``."""
    _, proj = mc.log_on_support(rho2, rank_tol)
    return float(np.real(np.trace(rho1)) - np.real(np.trace(rho1 @ proj)))


def cross_entropy(rho1: np.ndarray, rho2: np.ndarray, support_tol: float = SUPPORT_TOL,
                  rank_tol: float = mc.RANK_TOL) -> float:
    """Quantum cross entropy ``-Tr[rho1 ln rho2]``.

    Evaluated on the support of ``rho2``.  If ``rho1`` puts more than
    ``support_tol`` weight outside that support the result is ``inf``.
    """
    rho1 = np.asarray(rho1, dtype=complex)
    rho2 = np.asarray(rho2, dtype=complex)
    _same_shape(rho1, rho2)
    log2, proj = mc.log_on_support(rho2, rank_tol)
    leak = float(np.real(np.trace(rho1)) - np.real(np.trace(rho1 @ proj)))
    if leak > support_tol:
        return math.inf
    return float(-np.real(np.trace(rho1 @ log2)))


def relative_entropy(rho1: np.ndarray, rho2: np.ndarray, support_tol: float = SUPPORT_TOL) -> float:
    """``S(rho1 || rho2) = C(rho1, rho2) - S(rho1)``."""
    c = cross_entropy(rho1, rho2, support_tol)
    if math.isinf(c):
        return math.inf
    return c - von_neumann(rho1)


def holevo(ensemble: Sequence[tuple[float, np.ndarray]]) -> float:
    """Holevo information of ``[(p_i, rho_i), ...]``."""
    probs = np.array([p for p, _ in ensemble], dtype=float)
    if np.any(probs <= 0) or abs(probs.sum() - 1.0) > mc.EPS_NUM * max(len(probs), 1):
        raise ParameterError("ensemble weights must be positive and sum to one")
    avg = sum(p * np.asarray(r, dtype=complex) for p, r in ensemble)
    return von_neumann(avg) - sum(p * von_neumann(r) for p, r in ensemble)


def _check_subnormalized(s: np.ndarray, normalized: bool) -> float:
    tr = float(np.real(np.trace(s)))
    if normalized and abs(tr - 1.0) > 1e-8:
        raise ParameterError(f"state has trace {tr}, expected 1")
    if not -1e-12 <= tr <= 1.0 + 1e-12:
        raise ParameterError(f"trace {tr} outside [0, 1]")
    return min(max(tr, 0.0), 1.0)


def fidelity(s1: np.ndarray, s2: np.ndarray, generalized: bool = False) -> float:
    """Uhlmann fidelity ``(Tr sqrt(sqrt(s1) s2 sqrt(s1)))^2``.

    With ``generalized=True`` the inputs may be sub-normalized and the
    result is ``(sqrt(F) + sqrt((1 - Tr s1)(1 - Tr s2)))^2``.
    """
    s1 = np.asarray(s1, dtype=complex)
    s2 = np.asarray(s2, dtype=complex)
    _same_shape(s1, s2)
    t1 = _check_subnormalized(s1, not generalized)
    t2 = _check_subnormalized(s2, not generalized)
    root = mc.sqrtm_psd(s1)
    inner = np.linalg.eigvalsh(mc.hermitianize(root @ s2 @ root))
    f = float(np.sum(np.sqrt(np.clip(inner, 0.0, None)))) ** 2
    if generalized:
        f = (math.sqrt(f) + math.sqrt((1.0 - t1) * (1.0 - t2))) ** 2
    return min(f, 1.0)


def min_relative_entropy(rho1: np.ndarray, rho2: np.ndarray) -> float:
    """Sandwiched min relative entropy ``-ln F[rho1, rho2]``."""
    f = fidelity(rho1, rho2)
    if f <= 0.0:
        return math.inf
    return max(-math.log(f), 0.0)

"""Characteristic polynomials from trace power sums (Newton-Girard).

Used as an eigensolver-independent oracle: the coefficients depend on the
matrix only through Tr A, Tr A^2, ..., Tr A^n.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .errors import ArgumentError


def char_poly_from_traces(traces: Sequence[float]) -> np.ndarray:
    """Coefficients b_0 .. b_n of P(lambda) = sum_k b_k lambda^(n-k).

    ``traces[k-1]`` is Tr(A^k). Sign convention: b_0 = (-1)^n, so P is
    det(A - lambda I).
    """
    t = [float(v) for v in traces]
    n = len(t)
    if n == 0:
        raise ArgumentError("need at least one trace")
    lead = (-1.0) ** n
    b = [lead]
    for k in range(1, n + 1):
        acc = sum(b[k - i] * t[i - 1] for i in range(1, k)) + lead * t[k - 1]
        b.append(-acc / k)
    return np.array(b)


def traces_of(a: np.ndarray, n: int | None = None) -> np.ndarray:
    """[Tr A, Tr A^2, ..., Tr A^n] by repeated multiplication (real parts)."""
    a = np.asarray(a)
    n = a.shape[0] if n is None else n
    out = []
    p = np.eye(a.shape[0], dtype=a.dtype)
    for _ in range(n):
        p = p @ a
        out.append(np.trace(p).real)
    return np.array(out)


def power_sums(eigenvalues, k_max: int) -> np.ndarray:
    """[sum lambda, sum lambda^2, ..., sum lambda^k_max]."""
    if k_max < 1:
        raise ArgumentError("k_max must be at least 1")
    lam = np.asarray(eigenvalues, dtype=float)
    return np.array([np.sum(lam ** k) for k in range(1, k_max + 1)])


def _horner(c: np.ndarray, x: float) -> tuple[float, float]:
    p, dp = 0.0, 0.0
    for coef in c:
        dp = dp * x + p
        p = p * x + coef
    return p, dp


def real_roots(coefficients: Sequence[float], lo: float, hi: float, tol: float = 1e-14) -> np.ndarray:
    """All real roots in [lo, hi] of a polynomial with only real roots.

    Newton from above the largest root (monotone convergence when every root
    is real), then synthetic-division deflation. Intended for degree <= 8.
    """
    c = np.array(coefficients, dtype=float)
    c = c / c[0]
    roots = []
    while c.size > 1:
        x = hi
        for _ in range(500):
            p, dp = _horner(c, x)
            if dp == 0.0:
                break
            step = p / dp
            x -= step
            if abs(step) <= tol * max(1.0, abs(x)):
                break
        roots.append(x)
        c = np.polydiv(c, np.array([1.0, -x]))[0]
    full = np.array(coefficients, dtype=float)
    polished = []
    for x in roots:
        for _ in range(3):
            p, dp = _horner(full, x)
            if dp == 0.0:
                break
            x -= p / dp
        polished.append(x)
    return np.clip(np.sort(np.array(polished)), lo, hi)

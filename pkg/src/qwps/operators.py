"""Finite truncations of densely defined operators.

A TruncatedOperator is a square matrix together with the explicit ordered
basis of the truncated Hilbert space it acts on; everything downstream that
needs (anti)commutators or operator norms of such truncations goes through
the helpers here.
"""

from __future__ import annotations

from dataclasses import dataclass

import math
import warnings

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import lobpcg


__all__ = ["TruncatedOperator", "operator_norm", "commutator", "anticommutator"]


@dataclass
class TruncatedOperator:
    """Dense matrix acting on an explicitly indexed finite basis."""

    basis: tuple
    matrix: np.ndarray

    def __post_init__(self):
        n = len(self.basis)
        if self.matrix.shape != (n, n):
            raise ValueError(
                f"matrix shape {self.matrix.shape} does not match basis size {n}"
            )

    def position(self, label) -> int:
        try:
            return self.basis.index(label)
        except ValueError:
            raise KeyError(f"{label} not in truncated basis") from None


def operator_norm(mat, tol: float = 1e-11, maxiter: int = 400) -> float:
    """Spectral norm.

    Small or dense inputs use LAPACK directly.  Large sparse inputs use
    LOBPCG on A*A with a deterministic seeded start: the top singular values
    of the truncated operators here cluster within ~1e-8 of each other,
    which stalls ARPACK's eigenvector convergence, while the largest LOBPCG
    Ritz value settles to cluster precision quickly.
    """
    if sp.issparse(mat):
        if mat.nnz == 0:
            return 0.0
        if min(mat.shape) <= 800:
            return float(np.linalg.norm(mat.toarray(), 2))
        a = mat.tocsr()
        gram = (a.conj().T @ a).tocsr()
        if np.iscomplexobj(gram) and abs(gram.imag).max() == 0.0:
            gram = gram.real
        rng = np.random.default_rng(8139596)
        start = rng.standard_normal((gram.shape[0], 4))
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            eigvals, _ = lobpcg(gram, start, tol=tol, maxiter=maxiter, largest=True)
        return float(math.sqrt(max(eigvals.max(), 0.0)))
    return float(np.linalg.norm(np.asarray(mat), 2))


def commutator(a, b):
    return a @ b - b @ a


def anticommutator(a, b):
    return a @ b + b @ a

"""q-deformed Clebsch-Gordan matrices, computed numerically with a cache.

The tensor product of two ladder-form irreducibles decomposes with
multiplicity one,

    M_lam1 ⊗ M_lam2 = ⊕_mu M_mu,   mu = |lam1-lam2|, ..., lam1+lam2,

and the change of basis is encoded as a real orthogonal matrix C whose row
(mu, m) holds the coordinates of the new ladder basis vector in the tensor
basis (m1, m2).  Rows are built by extracting the one-dimensional kernel of
the raising action on each weight space and lowering with Delta(f),
normalized by the ladder coefficients, so that

    C (rho_lam1 ⊗ rho_lam2)(Delta(g)) C^t = blockdiag(rho_mu(g)).

The overall sign per block is fixed by making the highest-weight row's
coefficient on the maximal-m1 column positive; this reproduces the closed
forms used for the spinor decomposition (see :func:`cg_coeff_updown`).
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field

import numpy as np

from .qcore import (
    HalfInt,
    QContext,
    coproduct_action,
    hi,
    q_int,
    q_sqrt_int,
    weight_position,
    weight_range,
)

__all__ = ["CGBlock", "couple", "cg_block", "cg_coeff_updown", "clear_cache"]

_cache: dict = {}
_cache_lock = threading.Lock()

# kernel-extraction threshold is this multiple of ctx.tol
_KERNEL_THRESHOLD_FACTOR = 10.0


def couple(lam1, lam2) -> list[HalfInt]:
    """Highest weights |lam1-lam2|, ..., lam1+lam2 of the tensor product."""
    lam1, lam2 = hi(lam1), hi(lam2)
    if lam1.twice < 0 or lam2.twice < 0:
        raise ValueError("highest weights must be >= 0")
    lo = abs(lam1.twice - lam2.twice)
    hi_ = lam1.twice + lam2.twice
    return [HalfInt(t) for t in range(lo, hi_ + 1, 2)]


@dataclass(frozen=True)
class CGBlock:
    """Orthogonal Clebsch-Gordan matrix for M_lam1 ⊗ M_lam2.

    ``matrix[row, col]`` with rows indexed by (mu, m) pairs (mu ascending,
    m ascending within a block) and columns by tensor pairs (m1, m2) in
    lexicographic order.  Row (mu, m) is supported on columns with
    m1 + m2 = m.
    """

    lam1: HalfInt
    lam2: HalfInt
    matrix: np.ndarray
    row_index: tuple
    col_index: tuple
    _row_pos: dict = field(repr=False)
    _col_pos: dict = field(repr=False)

    def row_position(self, mu, m) -> int:
        return self._row_pos[(hi(mu).twice, hi(m).twice)]

    def col_position(self, m1, m2) -> int:
        return self._col_pos[(hi(m1).twice, hi(m2).twice)]

    def coeff(self, mu, m, m1, m2) -> float:
        """C_q(lam1 lam2 mu; m1 m2 m) with m = m1 + m2; zero when (mu, m) is illegal."""
        key = (hi(mu).twice, hi(m).twice)
        if key not in self._row_pos:
            return 0.0
        return float(self.matrix[self._row_pos[key], self.col_position(m1, m2)])


def clear_cache():
    with _cache_lock:
        _cache.clear()


def cg_block(lam1, lam2, ctx: QContext) -> CGBlock:
    """Clebsch-Gordan block matrix for (lam1, lam2); memoized on (2lam1, 2lam2, q)."""
    lam1, lam2 = hi(lam1), hi(lam2)
    if lam1.twice < 0 or lam2.twice < 0:
        raise ValueError("highest weights must be >= 0")
    key = (lam1.twice, lam2.twice, ctx.q)
    with _cache_lock:
        block = _cache.get(key)
    if block is not None:
        return block
    block = _build_block(lam1, lam2, ctx)
    with _cache_lock:
        _cache.setdefault(key, block)
        block = _cache[key]
    return block


def _build_block(lam1: HalfInt, lam2: HalfInt, ctx: QContext) -> CGBlock:
    w1 = weight_range(lam1)
    w2 = weight_range(lam2)
    col_index = tuple((m1, m2) for m1 in w1 for m2 in w2)
    col_pos = {(m1.twice, m2.twice): i for i, (m1, m2) in enumerate(col_index)}
    dim = len(col_index)

    E = coproduct_action(lam1, lam2, "e", ctx).real
    F = coproduct_action(lam1, lam2, "f", ctx).real

    # columns of each total weight, used to restrict the raising action
    weight_cols: dict[int, list[int]] = {}
    for i, (m1, m2) in enumerate(col_index):
        weight_cols.setdefault(m1.twice + m2.twice, []).append(i)

    if min(lam1.twice, lam2.twice) == 1:
        blocks = _spin_half_blocks(lam1, lam2, F, weight_cols, col_index, ctx)
    else:
        blocks = {
            mu: _lowering_chain(E, F, weight_cols, col_index, mu, ctx)
            for mu in couple(lam1, lam2)
        }

    rows = np.zeros((dim, dim))
    row_index = []
    row_pos = {}
    r = 0
    for mu in couple(lam1, lam2):
        block_rows = blocks[mu]
        for j, m in enumerate(weight_range(mu)):
            rows[r] = block_rows[j]
            row_index.append((mu, m))
            row_pos[(mu.twice, m.twice)] = r
            r += 1

    return CGBlock(lam1, lam2, rows, tuple(row_index), col_index, row_pos, col_pos)


def _lowering_chain(E, F, weight_cols, col_index, mu, ctx):
    """Rows of the mu block in ascending weight order, built by lowering the
    kernel vector of the raising action."""
    top = _highest_weight_vector(E, weight_cols, col_index, mu, ctx)
    chain = [top]
    m = mu
    while m.twice > -mu.twice:
        lowered = F @ chain[-1]
        norm = q_sqrt_int(mu - m + 1, ctx) * q_sqrt_int(mu + m, ctx)
        chain.append(lowered / norm)
        m = m - hi(1)
    return list(reversed(chain))


def _spin_half_blocks(lam1, lam2, F, weight_cols, col_index, ctx):
    """Stable construction when one factor is spin 1/2.

    The top chain has nonnegative components throughout (Delta(f) has
    nonnegative entries), so lowering it is cancellation free.  Every weight
    space of the lower component is two dimensional, and its ladder basis
    vector is the orthogonal complement of the top row at the same weight;
    computing it as a rotation avoids the catastrophic cancellation the
    direct lowering suffers at large weights.
    """
    mus = couple(lam1, lam2)
    mu_top = mus[-1]
    dim = len(col_index)

    # top chain: highest weight vector is the single maximal column
    top_vec = np.zeros(dim)
    top_vec[weight_cols[mu_top.twice][0]] = 1.0
    chain = [top_vec]
    m = mu_top
    while m.twice > -mu_top.twice:
        lowered = F @ chain[-1]
        norm = q_sqrt_int(mu_top - m + 1, ctx) * q_sqrt_int(mu_top + m, ctx)
        chain.append(lowered / norm)
        m = m - hi(1)
    top_rows = list(reversed(chain))
    blocks = {mu_top: top_rows}

    if len(mus) == 2:
        mu_low = mus[0]
        low_rows = []
        for m in weight_range(mu_low):
            cols = weight_cols[m.twice]
            assert len(cols) == 2
            top_here = top_rows[weight_position(mu_top, m)]
            x, y = top_here[cols[0]], top_here[cols[1]]
            vec = np.zeros(dim)
            vec[cols[0]], vec[cols[1]] = -y, x
            vec /= math.hypot(x, y)
            lead = max(cols, key=lambda c: col_index[c][0].twice)
            if vec[lead] < 0:
                vec = -vec
            low_rows.append(vec)
        blocks[mu_low] = low_rows
    return blocks


def _highest_weight_vector(E, weight_cols, col_index, mu, ctx):
    """Unit kernel vector of the raising action on the weight-mu subspace."""
    cols = weight_cols[mu.twice]
    cols_up = weight_cols.get(mu.twice + 2, [])
    dim = E.shape[0]
    v_local = None
    if not cols_up:
        # top weight space is one dimensional, nothing to solve
        v_local = np.ones(1)
    else:
        sub = E[np.ix_(cols_up, cols)]
        u, s, vt = np.linalg.svd(sub)
        threshold = _KERNEL_THRESHOLD_FACTOR * ctx.tol
        n_small = int(np.sum(s < threshold)) + (len(cols) - len(s))
        if n_small != 1:
            raise RuntimeError(
                f"raising action on weight {mu} subspace has a {n_small}-dimensional "
                f"kernel; expected exactly one (numerical degeneracy)"
            )
        v_local = vt[-1]
    vec = np.zeros(dim)
    vec[cols] = v_local / np.linalg.norm(v_local)
    # sign convention: coefficient on the maximal-m1 column is positive
    lead = max(cols, key=lambda c: col_index[c][0].twice)
    if vec[lead] < 0:
        vec = -vec
    return vec


def cg_coeff_updown(j, mu, ctx: QContext) -> tuple[float, float]:
    """Closed-form spinor coupling coefficients (C_{j mu}, S_{j mu}).

    C = q^{-(j+mu)/2} sqrt([j-mu]/[2j]),  S = q^{(j-mu)/2} sqrt([j+mu]/[2j]);
    they satisfy C^2 + S^2 = 1.
    """
    j, mu = hi(j), hi(mu)
    if j.twice < 1:
        raise ValueError(f"need j >= 1/2, got {j}")
    if abs(mu.twice) > j.twice or (j.twice - mu.twice) % 2:
        raise ValueError(f"mu = {mu} out of range for j = {j}")
    q = ctx.q
    denom = q_int(2 * j, ctx)
    c = q ** (-(j + mu).float / 2.0) * math.sqrt(q_int(j - mu, ctx) / denom)
    s = q ** ((j - mu).float / 2.0) * math.sqrt(q_int(j + mu, ctx) / denom)
    return c, s

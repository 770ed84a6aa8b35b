"""Spectral triples on the quantum weighted projective algebras.

Two constructions are assembled and verified on finite truncations:

* the odd triple on the coinvariant spinors of quantum SU(2), whose shifted
  Dirac operator has eigenvalues ±2(j+1) with multiplicity dim V^down_{j+1};
* the even triple on two copies of the degree-zero component, with the
  self-adjoint swap operator of eigenvalues ±(lam+1), the chirality grading
  and the (degenerate) Fredholm swap.

The module also carries the ambient quantum SU(2) ingredients these are cut
from: the orthonormal spinor basis built from the coupling coefficients
C_{j mu}, S_{j mu}, the classical Dirac spectrum with its multiplicities,
and the block-operator identity expressing q^{-D} through the right regular
action, which is verified rather than assumed.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from . import coord
from .cg import cg_block, cg_coeff_updown
from .coaction import (
    WeightPair,
    dim_V,
    dim_V_down,
    homogeneous_coord_basis,
    wp_gens,
)
from .coord import AlgebraElement, BasisIndex, gns_basis_vector, multiply, right_act
from .operators import TruncatedOperator, operator_norm
from .qcore import HalfInt, QContext, hi, q_int, weight_range

__all__ = [
    "SpinorBasisIndex",
    "Spinor",
    "SpectrumTable",
    "spinor_basis",
    "spinor_vector",
    "spinor_inner",
    "ambient_dirac_spectrum",
    "q_dirac_check",
    "odd_triple_spectrum",
    "even_triple_spectrum",
    "summability_partial_sum",
    "commutator_norm",
    "multiplication_commutator_coefficients",
    "even_triple_operators",
    "chirality_checks",
    "fredholm_degeneracy",
]

Q_DIRAC_GUARD = hi(3)


@dataclass(frozen=True)
class SpinorBasisIndex:
    """Label |j m mu arrow> of the orthonormal spinor basis.

    Up vectors live at lam = j + 1/2 (|m| <= j+1/2), down vectors at
    lam = j - 1/2 (j >= 1/2, |m| <= j-1/2); |mu| <= j for both.
    """

    j: HalfInt
    m: HalfInt
    mu: HalfInt
    arrow: str

    def __post_init__(self):
        j, m, mu = self.j, self.m, self.mu
        if self.arrow not in ("up", "down"):
            raise ValueError(f"arrow must be 'up' or 'down', got {self.arrow!r}")
        if j.twice < 0:
            raise ValueError(f"j must be >= 0, got {j}")
        if abs(mu.twice) > j.twice or (j.twice - mu.twice) % 2:
            raise ValueError(f"mu = {mu} out of range for j = {j}")
        lam = self.lam
        if lam.twice < 0:
            raise ValueError(f"down vectors need j >= 1/2, got j = {j}")
        if abs(m.twice) > lam.twice or (lam.twice - m.twice) % 2:
            raise ValueError(f"m = {m} out of range for arrow {self.arrow}, j = {j}")

    @property
    def lam(self) -> HalfInt:
        """Highest weight of the coordinate leg: j + 1/2 for up, j - 1/2 for down."""
        return HalfInt(self.j.twice + (1 if self.arrow == "up" else -1))


@dataclass(frozen=True)
class Spinor:
    """Element of coord ⊗ M_{1/2}, split into the e_- and e_+ components."""

    minus: AlgebraElement
    plus: AlgebraElement

    def __add__(self, other):
        return Spinor(self.minus + other.minus, self.plus + other.plus)

    def __sub__(self, other):
        return Spinor(self.minus - other.minus, self.plus - other.plus)

    def __rmul__(self, scalar):
        return Spinor(scalar * self.minus, scalar * self.plus)

    def norm_inf(self) -> float:
        return max(self.minus.norm_inf(), self.plus.norm_inf())


@dataclass(frozen=True)
class SpectrumTable:
    """Eigenvalue/multiplicity rows, strictly increasing, zero rows omitted."""

    rows: tuple

    def __post_init__(self):
        prev = None
        for ev, mult in self.rows:
            if mult <= 0:
                raise ValueError(f"multiplicity must be positive, got {mult} at {ev}")
            if prev is not None and ev <= prev:
                raise ValueError("eigenvalues must be strictly increasing")
            prev = ev

    @staticmethod
    def from_pairs(pairs) -> "SpectrumTable":
        merged: dict[float, int] = {}
        for ev, mult in pairs:
            if mult:
                merged[ev] = merged.get(ev, 0) + mult
        return SpectrumTable(tuple(sorted(merged.items())))

    def multiplicity(self, eigenvalue: float) -> int:
        for ev, mult in self.rows:
            if ev == eigenvalue:
                return mult
        return 0

    def total(self) -> int:
        return sum(mult for _, mult in self.rows)

    def to_csv_text(self) -> str:
        lines = ["eigenvalue,multiplicity"]
        for ev, mult in self.rows:
            lines.append(f"{ev:.17g},{mult}")
        return "\n".join(lines) + "\n"

    def to_json_text(self) -> str:
        return json.dumps(
            [{"eigenvalue": ev, "multiplicity": mult} for ev, mult in self.rows],
            indent=2,
        )


def spinor_basis(j_max) -> list[SpinorBasisIndex]:
    """All spinor labels with j <= j_max, ordered (j, arrow, m, mu)."""
    j_max = hi(j_max)
    out = []
    for tj in range(0, j_max.twice + 1):
        j = HalfInt(tj)
        for arrow in ("down", "up"):
            if arrow == "down" and tj == 0:
                continue
            lam = HalfInt(tj + (1 if arrow == "up" else -1))
            for m in weight_range(lam):
                for mu in weight_range(j):
                    out.append(SpinorBasisIndex(j, m, mu, arrow))
    return out


def spinor_vector(idx: SpinorBasisIndex, ctx: QContext) -> Spinor:
    """Orthonormal spinor basis vector as an element of coord ⊗ M_{1/2}.

    down: q^m sqrt[2j^-+1] ( C_{j mu} t^{j-}_{m,mu+1/2} ⊗ e_-
                           + S_{j mu} t^{j-}_{m,mu-1/2} ⊗ e_+ )
    up:   q^m sqrt[2j^++1] ( -S_{j+1,mu} t^{j+}_{m,mu+1/2} ⊗ e_-
                           + C_{j+1,mu} t^{j+}_{m,mu-1/2} ⊗ e_+ )

    Legs whose coupling coefficient vanishes at the boundary (mu = ±j for the
    down family) are skipped before the basis index is formed.
    """
    lam = idx.lam
    scale = ctx.q ** idx.m.float * math.sqrt(q_int(2 * lam + 1, ctx))
    half = hi(0.5)
    if idx.arrow == "down":
        c, s = cg_coeff_updown(idx.j, idx.mu, ctx)
        minus_coeff, plus_coeff = c, s
        # C vanishes iff mu = j, S vanishes iff mu = -j (exact boundary cases)
        if idx.mu.twice == idx.j.twice:
            minus_coeff = 0.0
        if idx.mu.twice == -idx.j.twice:
            plus_coeff = 0.0
    else:
        c, s = cg_coeff_updown(idx.j + 1, idx.mu, ctx)
        minus_coeff, plus_coeff = -s, c
    minus = AlgebraElement.zero()
    plus = AlgebraElement.zero()
    if minus_coeff != 0.0:
        minus = AlgebraElement.basis(
            BasisIndex(lam, idx.m, idx.mu + half), scale * minus_coeff
        )
    if plus_coeff != 0.0:
        plus = AlgebraElement.basis(
            BasisIndex(lam, idx.m, idx.mu - half), scale * plus_coeff
        )
    return Spinor(minus, plus)


def spinor_inner(a: Spinor, b: Spinor, ctx: QContext) -> complex:
    """Inner product on coord ⊗ M_{1/2}: Haar pairing summed over the two legs."""
    return coord.inner(a.minus, b.minus, ctx) + coord.inner(a.plus, b.plus, ctx)


def ambient_dirac_spectrum(j_max) -> SpectrumTable:
    """Classical Dirac spectrum on quantum SU(2): 2j+3/2 with multiplicity
    (2j+1)(2j+2) and -(2j+1/2) with multiplicity 2j(2j+1), for j <= j_max."""
    j_max = hi(j_max)
    pairs = []
    for tj in range(0, j_max.twice + 1):
        pairs.append((tj + 1.5, (tj + 1) * (tj + 2)))
        pairs.append((-(tj + 0.5), tj * (tj + 1)))
    return SpectrumTable.from_pairs(pairs)


def q_dirac_check(j_max, ctx: QContext) -> float:
    """Assemble q^{-D} as a 2x2 block operator in the right regular action and
    report the worst eigenvector residual over the spinor basis with j <= j_max.

    In the ordered spinor components (e_+, e_-) the blocks are

        q^{3/2} [ d(k^2) + q^{-1}(q-q^{-1})^2 d(fe)   q^{-1/2}(q-q^{-1}) d(fk^{-1}) ]
                [ q^{-1/2}(q-q^{-1}) d(k^{-1}e)       d(k^{-2})                    ]

    and the expected eigenvalues are q^{-(2j+3/2)} on up vectors and
    q^{2j+1/2} on down vectors.
    """
    j_max = hi(j_max)
    if j_max.twice > Q_DIRAC_GUARD.twice:
        raise ValueError(f"j_max = {j_max} exceeds the cost guard {Q_DIRAC_GUARD}")
    q = ctx.q
    lam_q = q - 1.0 / q
    pref = q**1.5
    worst = 0.0
    for idx in spinor_basis(j_max):
        v = spinor_vector(idx, ctx)
        out_plus = pref * (
            right_act(("k", "k"), v.plus, ctx)
            + (lam_q**2 / q) * right_act(("f", "e"), v.plus, ctx)
            + (lam_q / q**0.5) * right_act(("f", "kinv"), v.minus, ctx)
        )
        out_minus = pref * (
            (lam_q / q**0.5) * right_act(("kinv", "e"), v.plus, ctx)
            + right_act(("kinv", "kinv"), v.minus, ctx)
        )
        if idx.arrow == "up":
            expected = q ** (-(2 * idx.j.float + 1.5))
        else:
            expected = q ** (2 * idx.j.float + 0.5)
        resid = (Spinor(out_minus, out_plus) - expected * v).norm_inf()
        worst = max(worst, resid)
    return worst


def odd_triple_spectrum(wp: WeightPair, j_max) -> SpectrumTable:
    """Shifted coinvariant Dirac spectrum: ±2(j+1), each with multiplicity
    dim V^down_{j+1} (equal to the up dimension at level j)."""
    j_max = hi(j_max)
    pairs = []
    for tj in range(0, j_max.twice + 1):
        mult = dim_V_down(wp, HalfInt(tj + 2))
        ev = tj / 2.0 * 2 + 2  # 2(j+1)
        pairs.append((ev, mult))
        pairs.append((-ev, mult))
    return SpectrumTable.from_pairs(pairs)


def even_triple_spectrum(wp: WeightPair, lam_max) -> SpectrumTable:
    """Even-triple spectrum: ±(lam+1) with multiplicity dim V_lam."""
    lam_max = hi(lam_max)
    pairs = []
    for tl in range(0, lam_max.twice + 1):
        mult = dim_V(wp, HalfInt(tl))
        ev = tl / 2.0 + 1
        pairs.append((ev, mult))
        pairs.append((-ev, mult))
    return SpectrumTable.from_pairs(pairs)


def summability_partial_sum(wp: WeightPair, N, triple: str, exponent: int = 2) -> float:
    """Partial trace sum(mult * |eigenvalue|^-exponent) over shells with index <= N.

    With exponent 2 the sum diverges logarithmically in N for both triples
    (the dimension is exactly 2); with exponent 3 it converges.
    """
    if hi(N).twice < 2:
        raise ValueError(f"N must be >= 1, got {N}")
    N = hi(N)
    total = 0.0
    if triple == "odd":
        for tj in range(0, N.twice + 1):
            mult = dim_V_down(wp, HalfInt(tj + 2))
            if mult:
                total += 2.0 * mult * float(tj / 2.0 * 2 + 2) ** (-exponent)
    elif triple == "even":
        for tl in range(0, N.twice + 1):
            mult = dim_V(wp, HalfInt(tl))
            if mult:
                total += 2.0 * mult * float(tl / 2.0 + 1) ** (-exponent)
    else:
        raise ValueError(f"triple must be 'odd' or 'even', got {triple!r}")
    return total


# ---------------------------------------------------------------------------
# auxiliary swap operator on two GNS copies and its commutators


def _shell_offsets(lam_cap: HalfInt):
    offsets = []
    total = 0
    for tl in range(0, lam_cap.twice + 1):
        offsets.append(total)
        total += (tl + 1) ** 2
    return offsets, total


def _cg_leg_vector(block, tl: int, target_tl: int, a_twice: int) -> np.ndarray:
    """C_q(1/2, lam, mu; a, w) over the weights w of shell lam, as an array."""
    mu = HalfInt(target_tl)
    out = np.zeros(tl + 1)
    for i in range(tl + 1):
        w = HalfInt(2 * i - tl)
        tgt = HalfInt(w.twice + a_twice)
        if abs(tgt.twice) <= target_tl:
            out[i] = block.coeff(mu, tgt, HalfInt(a_twice), w)
    return out


def _gns_multiplication_matrix(gen: str, lam_cap: HalfInt, ctx: QContext):
    """Sparse matrix of multiplication by alpha or beta on the orthonormal GNS
    basis |lam m n>, truncated to shells lam <= lam_cap.

    Basis layout: shells ascending, index offset + (i_m * (2lam+1) + i_n).
    """
    if gen == "one":
        _, total = _shell_offsets(lam_cap)
        return sp.identity(total, format="csr")
    if gen not in ("alpha", "beta"):
        raise ValueError(f"gen must be 'alpha', 'beta' or 'one', got {gen!r}")
    a_twice = 1
    b_twice = 1 if gen == "alpha" else -1
    offsets, total = _shell_offsets(lam_cap)
    rows, cols, vals = [], [], []
    q = ctx.q
    for tl in range(0, lam_cap.twice + 1):
        d = tl + 1
        block = cg_block(hi(0.5), HalfInt(tl), ctx)
        base = offsets[tl]
        ii = np.arange(d)
        col_grid = base + (ii[:, None] * d + ii[None, :])
        for target_tl in (tl + 1, tl - 1):
            if target_tl < 0 or target_tl > lam_cap.twice:
                continue
            dt = target_tl + 1
            um = _cg_leg_vector(block, tl, target_tl, a_twice)
            vn = _cg_leg_vector(block, tl, target_tl, b_twice)
            # positions of m+a and n+b inside the target shell
            im_t = (2 * ii - tl + a_twice + target_tl) // 2
            in_t = (2 * ii - tl + b_twice + target_tl) // 2
            valid_m = (im_t >= 0) & (im_t < dt) & (um != 0.0)
            valid_n = (in_t >= 0) & (in_t < dt) & (vn != 0.0)
            if not valid_m.any() or not valid_n.any():
                continue
            scale = q ** (-a_twice / 2.0) * math.sqrt(
                q_int(HalfInt(tl) * 2 + 1, ctx) / q_int(HalfInt(target_tl) * 2 + 1, ctx)
            )
            coeffs = scale * np.outer(um, vn)
            row_grid = offsets[target_tl] + (im_t[:, None] * dt + in_t[None, :])
            mask = valid_m[:, None] & valid_n[None, :]
            rows.append(row_grid[mask])
            cols.append(col_grid[mask])
            vals.append(coeffs[mask])
    rows = np.concatenate(rows)
    cols = np.concatenate(cols)
    vals = np.concatenate(vals)
    return sp.csr_matrix((vals, (rows, cols)), shape=(total, total))


def _shell_of_index(lam_cap: HalfInt) -> np.ndarray:
    parts = []
    for tl in range(0, lam_cap.twice + 1):
        parts.append(np.full((tl + 1) ** 2, tl, dtype=int))
    return np.concatenate(parts)


def commutator_norm(gen: str, lam_cap, ctx: QContext) -> float:
    """Norm of [Q, pi(gen)] on two truncated GNS copies, interior block only.

    Q swaps the copies with eigenvalue ±(lam+1); pi is the GNS multiplication
    operator of the generator.  Multiplication moves shell lam to lam ± 1/2,
    so columns are restricted to shells lam <= cap - 1/2, where the truncated
    commutator agrees exactly with the densely defined one.
    """
    lam_cap = hi(lam_cap)
    if lam_cap.twice < 2:
        raise ValueError(f"lambda cap must be >= 1, got {lam_cap}")
    P = _gns_multiplication_matrix(gen, lam_cap, ctx)
    shells = _shell_of_index(lam_cap)
    dvals = shells / 2.0 + 1.0
    D = sp.diags(dvals)
    Q = sp.bmat([[None, D], [D, None]], format="csr")
    Pi = sp.bmat([[P, None], [None, P]], format="csr")
    comm = (Q @ Pi - Pi @ Q).tocsc()
    interior = np.concatenate([shells <= lam_cap.twice - 1] * 2)
    sub = comm[:, np.where(interior)[0]]
    return operator_norm(sub)


def multiplication_commutator_coefficients(gen: str, idx: BasisIndex, ctx: QContext):
    """Coefficients of [Q, pi(gen)] applied to an unnormalized basis vector
    t^{lam}_{mn} in one copy, keyed by the target index in the other copy.

    Each coefficient equals (mu - lam) times the product of the two coupling
    coefficients of the multiplication rule, i.e. -(1/2) C_q C_q on the
    lam - 1/2 shell and +(1/2) C_q C_q on the lam + 1/2 shell.
    """
    alpha, beta, _, _ = coord.gens(ctx)
    g = alpha if gen == "alpha" else beta
    prod = multiply(g, AlgebraElement.basis(idx), ctx)
    return {
        tgt: (tgt.lam.float - idx.lam.float) * c for tgt, c in prod.terms.items()
    }


# ---------------------------------------------------------------------------
# even triple: operators, chirality, Fredholm degeneracy


def even_triple_operators(wp: WeightPair, lam_max, ctx: QContext, order: int = 0):
    """Truncated even-triple data on two copies of the homogeneous component.

    Returns a dict with the doubled basis ((index, arrow) pairs), the Dirac
    swap D' (eigenvalues ±(lam+1)), the chirality omega, the Fredholm swap F',
    and the represented generators pi(a), pi(b).
    """
    lam_max = hi(lam_max)
    base = homogeneous_coord_basis(wp, order, lam_max)
    pos = {idx: i for i, idx in enumerate(base)}
    B = len(base)
    a_el, b_el = wp_gens(wp, ctx)

    def rep_matrix(element: AlgebraElement) -> np.ndarray:
        mat = np.zeros((B, B), dtype=complex)
        for col, idx in enumerate(base):
            out = multiply(element, gns_basis_vector(idx, ctx), ctx)
            for tgt, c in out.terms.items():
                row = pos.get(tgt)
                if row is not None:
                    nrm = ctx.q ** tgt.m.float * math.sqrt(q_int(2 * tgt.lam + 1, ctx))
                    mat[row, col] += c / nrm
        return mat

    Pa = rep_matrix(a_el)
    Pb = rep_matrix(b_el)
    lam_plus_1 = np.array([idx.lam.float + 1.0 for idx in base])
    eye = np.eye(B)
    zero = np.zeros((B, B))
    dblock = np.diag(lam_plus_1)
    basis = tuple((idx, "up") for idx in base) + tuple((idx, "down") for idx in base)
    mk = lambda m: TruncatedOperator(basis, m)  # noqa: E731
    return {
        "basis": basis,
        "D": mk(np.block([[zero, dblock], [dblock, zero]])),
        "omega": mk(np.block([[eye, zero], [zero, -eye]])),
        "F": mk(np.block([[zero, eye], [eye, zero]])),
        "pi_a": mk(np.block([[Pa, zero], [zero, Pa]])),
        "pi_b": mk(np.block([[Pb, zero], [zero, Pb]])),
    }


def chirality_checks(wp: WeightPair, lam_max, ctx: QContext, order: int = 0) -> dict:
    """Exact grading identities on the truncated even triple."""
    ops = even_triple_operators(wp, lam_max, ctx, order)
    omega = ops["omega"].matrix
    D = ops["D"].matrix
    n = omega.shape[0]
    report = {
        "omega_squared": float(np.abs(omega @ omega - np.eye(n)).max()),
        "omega_selfadjoint": float(np.abs(omega - omega.conj().T).max()),
        "anticommutes_dirac": float(np.abs(omega @ D + D @ omega).max()),
        "commutes_pi_a": float(
            np.abs(ops["pi_a"].matrix @ omega - omega @ ops["pi_a"].matrix).max()
        ),
        "commutes_pi_b": float(
            np.abs(ops["pi_b"].matrix @ omega - omega @ ops["pi_b"].matrix).max()
        ),
    }
    report["max"] = max(report.values())
    return report


def fredholm_degeneracy(wp: WeightPair, lam_max, ctx: QContext, order: int = 0) -> dict:
    """Degeneracy evidence: F' squares to one, is self-adjoint and commutes
    with the represented algebra on the truncation."""
    ops = even_triple_operators(wp, lam_max, ctx, order)
    F = ops["F"].matrix
    n = F.shape[0]
    report = {
        "F_squared": float(np.abs(F @ F - np.eye(n)).max()),
        "F_selfadjoint": float(np.abs(F - F.conj().T).max()),
        "commutes_pi_a": float(
            np.abs(F @ ops["pi_a"].matrix - ops["pi_a"].matrix @ F).max()
        ),
        "commutes_pi_b": float(
            np.abs(F @ ops["pi_b"].matrix - ops["pi_b"].matrix @ F).max()
        ),
    }
    report["max"] = max(report.values())
    return report

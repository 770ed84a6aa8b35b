"""Circle grading of the quantum SU(2) algebra for a coprime weight pair.

The coaction by the circle algebra is equivalent to the integer grading

    deg t^lam_{mn} = -(m+n) k + (m-n) l,

so the generators satisfy deg(alpha) = -k and deg(beta) = l.  The degree-zero
subalgebra is the quantum weighted projective algebra; it is generated by
a = beta beta* and b = beta^k alpha^l, and this module verifies its defining
relations inside the coordinate algebra, enumerates coinvariant bases, and
evaluates the eigenspace dimension formulas against brute-force counting
oracles.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce

from .coord import AlgebraElement, BasisIndex, gens, multiply, star, unit
from .qcore import HalfInt, QContext, hi, weight_range

__all__ = [
    "WeightPair",
    "CoinvariantSpinorIndex",
    "degree",
    "project_degree",
    "wp_gens",
    "verify_wp_relations",
    "uq_degree",
    "spinor_degree",
    "coinvariant_coord_basis",
    "homogeneous_coord_basis",
    "coinvariant_spinor_basis",
    "dim_V_down",
    "dim_V_down_oracle",
    "dim_V_up_oracle",
    "dim_V",
    "dim_V_oracle",
    "dim_table",
]

# beta^k alpha^l blows up combinatorially; verify_wp_relations refuses beyond this
WP_RELATION_GUARD = 8


@dataclass(frozen=True)
class WeightPair:
    """Coprime positive integers (k, l) selecting the circle coaction."""

    k: int
    l: int

    def __post_init__(self):
        if self.k < 1 or self.l < 1:
            raise ValueError(f"k, l must be positive, got ({self.k}, {self.l})")
        if math.gcd(self.k, self.l) != 1:
            raise ValueError(f"k = {self.k} and l = {self.l} are not coprime")

    @property
    def s(self) -> int:
        return self.k + self.l


@dataclass(frozen=True)
class CoinvariantSpinorIndex:
    """Label (j, p, arrow) of a coinvariant spinor basis vector.

    The underlying ket is |j, p(l+k)-1/2, p(l-k), arrow>; legality is decided
    by exact integer arithmetic on doubled values:
    down needs p(l+k) in {-j+1, ..., j}, up needs p(l+k) in {-j, ..., j+1}.
    """

    j: HalfInt
    p: HalfInt
    arrow: str

    def __post_init__(self):
        if self.arrow not in ("up", "down"):
            raise ValueError(f"arrow must be 'up' or 'down', got {self.arrow!r}")
        if self.j.twice < 0:
            raise ValueError(f"j must be >= 0, got {self.j}")

    def weight_value(self, wp: WeightPair) -> HalfInt:
        """p(l+k), the quantity the admissibility windows constrain."""
        return self.p * wp.s


def _spinor_index_legal(wp: WeightPair, j: HalfInt, p: HalfInt, arrow: str) -> bool:
    v2 = p.twice * wp.s  # twice p(l+k)
    if (v2 - j.twice) % 2:
        return False
    if arrow == "down":
        return -j.twice + 2 <= v2 <= j.twice
    return -j.twice <= v2 <= j.twice + 2


def degree(wp: WeightPair, idx: BasisIndex) -> int:
    """Homogeneity order -(m+n)k + (m-n)l of a basis matrix element."""
    t = -(idx.m.twice + idx.n.twice) * wp.k + (idx.m.twice - idx.n.twice) * wp.l
    assert t % 2 == 0
    return t // 2


def project_degree(a: AlgebraElement, wp: WeightPair, i: int) -> AlgebraElement:
    """Component of homogeneity order i; summing over occurring orders gives a back."""
    return AlgebraElement(
        {idx: c for idx, c in a.terms.items() if degree(wp, idx) == i}
    )


def wp_gens(wp: WeightPair, ctx: QContext):
    """Generators a = beta beta*, b = beta^k alpha^l of the degree-0 subalgebra."""
    alpha, beta, _, beta_star = gens(ctx)
    a = multiply(beta, beta_star, ctx)
    factors = [beta] * wp.k + [alpha] * wp.l
    b = reduce(lambda x, y: multiply(x, y, ctx), factors)
    return a, b


def _poly_in(a: AlgebraElement, factors, ctx: QContext) -> AlgebraElement:
    """Product of (1 + c*a) style factors given as scalars c."""
    out = unit()
    for c in factors:
        out = multiply(out, unit() + c * a, ctx)
    return out


def verify_wp_relations(wp: WeightPair, ctx: QContext) -> dict:
    """Residuals of the weighted projective algebra relations, computed in coord.

    a* = a,
    a b* = q^{-2l} b* a,
    b* b = q^{2kl} a^k prod_{m=0}^{l-1} (1 - q^{2(m+1)} a),
    b b* = a^k prod_{m=1}^{l} (1 - q^{-2(m-1)} a).
    """
    if wp.s > WP_RELATION_GUARD:
        raise ValueError(
            f"k + l = {wp.s} exceeds the guard {WP_RELATION_GUARD}; "
            f"b = beta^k alpha^l would be too costly"
        )
    q = ctx.q
    a, b = wp_gens(wp, ctx)
    bs = star(b, ctx)

    def mul(*xs):
        return reduce(lambda u, v: multiply(u, v, ctx), xs)

    a_pow_k = reduce(lambda u, v: multiply(u, v, ctx), [a] * wp.k)
    rhs_bsb = multiply(
        q ** (2 * wp.k * wp.l) * a_pow_k,
        _poly_in(a, [-(q ** (2 * (m + 1))) for m in range(wp.l)], ctx),
        ctx,
    )
    rhs_bbs = multiply(
        a_pow_k,
        _poly_in(a, [-(q ** (-2 * (m - 1))) for m in range(1, wp.l + 1)], ctx),
        ctx,
    )
    residuals = {
        "a_selfadjoint": (star(a, ctx) - a).norm_inf(),
        "a_bstar": (mul(a, bs) - q ** (-2 * wp.l) * mul(bs, a)).norm_inf(),
        "bstar_b": (mul(bs, b) - rhs_bsb).norm_inf(),
        "b_bstar": (mul(b, bs) - rhs_bbs).norm_inf(),
    }
    residuals["max"] = max(residuals.values())
    return residuals


def uq_degree(wp: WeightPair, word) -> int:
    """Homogeneity order of a generator word of the enveloping algebra:
    e has order -(k+l), f has k+l, k^{±1} have 0; words add."""
    if isinstance(word, str):
        word = (word,)
    table = {"e": -wp.s, "f": wp.s, "k": 0, "kinv": 0}
    return sum(table[letter] for letter in word)


def spinor_degree(wp: WeightPair, i: int, sign: str) -> int:
    """Order of the spin-1/2 basis vectors under the lifted coaction indexed by i.

    e_+ is homogeneous of order i and e_- of order i + k + l; the fixed
    choice downstream is i = -k, giving orders (-k, l).
    """
    if sign in ("+", "plus", "up"):
        return i
    if sign in ("-", "minus", "down"):
        return i + wp.s
    raise ValueError(f"sign must be '+' or '-', got {sign!r}")


def homogeneous_coord_basis(wp: WeightPair, order: int, lam_max) -> list[BasisIndex]:
    """All basis indices of the given homogeneity order with lam <= lam_max."""
    lam_max = hi(lam_max)
    out = []
    for tl in range(0, lam_max.twice + 1):
        lam = HalfInt(tl)
        for m in weight_range(lam):
            for n in weight_range(lam):
                idx = BasisIndex(lam, m, n)
                if degree(wp, idx) == order:
                    out.append(idx)
    return out


def coinvariant_coord_basis(wp: WeightPair, lam_max) -> list[BasisIndex]:
    """Degree-0 basis: indices (lam, p(l+k), p(l-k)) over half-integer p."""
    lam_max = hi(lam_max)
    out = []
    for tl in range(0, lam_max.twice + 1):
        lam = HalfInt(tl)
        s = wp.s
        for tp in range(-tl // s - 1, tl // s + 2):
            m2 = tp * s
            n2 = tp * (wp.l - wp.k)
            if abs(m2) > tl or abs(n2) > tl:
                continue
            if (tl - m2) % 2:
                continue
            out.append(BasisIndex(lam, HalfInt(m2), HalfInt(n2)))
    return out


def coinvariant_spinor_basis(wp: WeightPair, j_max) -> list[CoinvariantSpinorIndex]:
    """All legal (j, p, arrow) labels with j <= j_max, ordered by (j, p, arrow)."""
    j_max = hi(j_max)
    out = []
    for tj in range(0, j_max.twice + 1):
        j = HalfInt(tj)
        for arrow in ("down", "up"):
            lo = -tj + 2 if arrow == "down" else -tj
            hi_ = tj if arrow == "down" else tj + 2
            for tp in range(-(tj + 2) // wp.s - 2, (tj + 2) // wp.s + 3):
                v2 = tp * wp.s
                if lo <= v2 <= hi_ and (v2 - tj) % 2 == 0:
                    out.append(CoinvariantSpinorIndex(j, HalfInt(tp), arrow))
    return out


# ---------------------------------------------------------------------------
# eigenspace dimensions: closed forms and enumeration oracles


def dim_V_down(wp: WeightPair, j) -> int:
    """Closed-form dimension of the level-j down space of coinvariant spinors."""
    j = hi(j)
    if j.twice < 0:
        raise ValueError(f"j must be >= 0, got {j}")
    s = wp.s
    t = j.twice
    if t == 0:
        return 0
    if s % 2 == 0:
        if t % 2:
            return 0
        jj, h = t // 2, s // 2
        return jj // h + (jj - 1) // h + 1
    if t % 2 == 0:
        jj = t // 2
        return jj // s + (jj - 1) // s + 1
    # half-odd j: [j/s + 1/2] + [(j-1)/s + 1/2] in exact integer arithmetic
    return (t + s) // (2 * s) + (t - 2 + s) // (2 * s)


def dim_V_down_oracle(wp: WeightPair, j) -> int:
    """Count half-integers p with p(l+k) in {-j+1, ..., j}."""
    j = hi(j)
    t, s = j.twice, wp.s
    count = 0
    for tp in range(-(t + 2) // s - 2, (t + 2) // s + 3):
        v2 = tp * s
        if -t + 2 <= v2 <= t and (v2 - t) % 2 == 0:
            count += 1
    return count


def dim_V_up_oracle(wp: WeightPair, j) -> int:
    """Count half-integers p with p(l+k) in {-j, ..., j+1}."""
    j = hi(j)
    t, s = j.twice, wp.s
    count = 0
    for tp in range(-(t + 2) // s - 2, (t + 2) // s + 3):
        v2 = tp * s
        if -t <= v2 <= t + 2 and (v2 - t) % 2 == 0:
            count += 1
    return count


def dim_V(wp: WeightPair, lam) -> int:
    """Closed-form dimension of the degree-0 subspace at highest weight lam."""
    lam = hi(lam)
    if lam.twice < 0:
        raise ValueError(f"lam must be >= 0, got {lam}")
    s = wp.s
    t = lam.twice
    if s % 2 == 0:
        if t % 2:
            return 0
        return 2 * ((t // 2) // (s // 2)) + 1
    if t % 2 == 0:
        return 2 * ((t // 2) // s) + 1
    return 2 * ((t + s) // (2 * s))


def dim_V_oracle(wp: WeightPair, lam) -> int:
    """Count half-integers p with p(l+k) in {-lam, ..., lam}."""
    lam = hi(lam)
    t, s = lam.twice, wp.s
    count = 0
    for tp in range(-t // s - 2, t // s + 3):
        v2 = tp * s
        if -t <= v2 <= t and (v2 - t) % 2 == 0:
            count += 1
    return count


def dim_table(wp: WeightPair, index_max) -> list[dict]:
    """Rows (family, index, closed_form, oracle, match) for both dimension formulas.

    Half-integer rows appear only when k+l is odd; for even k+l those spaces
    vanish identically and the rows are omitted.
    """
    index_max = hi(index_max)
    step = 2 if wp.s % 2 == 0 else 1
    rows = []
    for t in range(0, index_max.twice + 1, step):
        x = HalfInt(t)
        closed, oracle = dim_V_down(wp, x), dim_V_down_oracle(wp, x)
        rows.append(
            {
                "family": "V_down",
                "index": x.float,
                "closed_form": closed,
                "oracle": oracle,
                "match": closed == oracle,
            }
        )
    for t in range(0, index_max.twice + 1, step):
        x = HalfInt(t)
        closed, oracle = dim_V(wp, x), dim_V_oracle(wp, x)
        rows.append(
            {
                "family": "V",
                "index": x.float,
                "closed_form": closed,
                "oracle": oracle,
                "match": closed == oracle,
            }
        )
    return rows

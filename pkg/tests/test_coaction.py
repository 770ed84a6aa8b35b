"""Circle grading, weighted projective generators, coinvariants, dimensions."""

import math

import pytest

from qwps.coaction import (
    CoinvariantSpinorIndex,
    WeightPair,
    coinvariant_coord_basis,
    coinvariant_spinor_basis,
    degree,
    dim_table,
    dim_V,
    dim_V_down,
    dim_V_down_oracle,
    dim_V_oracle,
    dim_V_up_oracle,
    homogeneous_coord_basis,
    project_degree,
    spinor_degree,
    uq_degree,
    verify_wp_relations,
    wp_gens,
)
from qwps.coord import AlgebraElement, BasisIndex, gens, multiply, right_act, star
from qwps.qcore import QContext, hi

CTX = QContext(0.5, 1e-9)

COPRIME_PAIRS = [
    (k, l)
    for k in range(1, 9)
    for l in range(1, 9)
    if k + l <= 9 and math.gcd(k, l) == 1
]


def test_weight_pair_validation():
    with pytest.raises(ValueError):
        WeightPair(2, 4)
    with pytest.raises(ValueError):
        WeightPair(0, 1)
    assert WeightPair(3, 4).s == 7


def test_generator_degrees():
    wp = WeightPair(2, 3)
    alpha, beta, alpha_s, beta_s = gens(CTX)
    for el, expected in ((alpha, -2), (beta, 3), (alpha_s, 2), (beta_s, -3)):
        (idx,) = el.terms
        assert degree(wp, idx) == expected
    assert degree(wp, BasisIndex.of(0, 0, 0)) == 0


def test_project_degree():
    wp = WeightPair(1, 1)
    alpha, beta, _, _ = gens(CTX)
    both = alpha + beta
    assert (project_degree(both, wp, -1) - alpha).norm_inf() == 0.0
    assert (project_degree(both, wp, 1) - beta).norm_inf() == 0.0
    assert project_degree(both, wp, 0).norm_inf() == 0.0
    # homogeneous element projects to itself
    assert (project_degree(alpha, wp, -1) - alpha).norm_inf() == 0.0
    # occurring degrees reconstruct the element
    degrees = {degree(wp, idx) for idx in both.terms}
    rebuilt = AlgebraElement.zero()
    for d in degrees:
        rebuilt = rebuilt + project_degree(both, wp, d)
    assert (rebuilt - both).norm_inf() == 0.0


@pytest.mark.parametrize("k,l", [(1, 1), (1, 2), (2, 1), (2, 3)])
def test_wp_generators_are_coinvariant(k, l):
    wp = WeightPair(k, l)
    a, b = wp_gens(wp, CTX)
    assert all(degree(wp, idx) == 0 for idx in a.terms)
    assert all(degree(wp, idx) == 0 for idx in b.terms)
    assert (star(a, CTX) - a).norm_inf() < CTX.tol


def test_wp_b_oracle_for_unit_weights():
    # b = beta * alpha for (1, 1): a single coupled term, cross-checked by an
    # explicit evaluation of the product rule on the 2 ⊗ 2 block
    wp = WeightPair(1, 1)
    _, b = wp_gens(wp, CTX)
    from qwps.cg import cg_block

    block = cg_block(hi(0.5), hi(0.5), CTX)
    cm = block.coeff(hi(1), hi(1), hi(0.5), hi(0.5))
    cn = block.coeff(hi(1), hi(0), hi(-0.5), hi(0.5))
    expected = AlgebraElement.basis(BasisIndex.of(1, 1, 0), cm * cn)
    assert (b - expected).norm_inf() < 1e-14


@pytest.mark.parametrize("k,l", [(1, 1), (1, 2), (2, 3)])
def test_wp_relations(k, l):
    res = verify_wp_relations(WeightPair(k, l), CTX)
    assert res["max"] < CTX.tol


def test_wp_relations_guard():
    with pytest.raises(ValueError):
        verify_wp_relations(WeightPair(4, 5), CTX)


def test_uq_and_spinor_degrees():
    wp = WeightPair(1, 2)
    assert uq_degree(wp, "e") == -3
    assert uq_degree(wp, "k") == 0
    assert uq_degree(wp, ("e", "f")) == 0
    assert spinor_degree(wp, -wp.k, "+") == -1
    assert spinor_degree(wp, -wp.k, "-") == 2
    assert spinor_degree(wp, 0, "-") == 3


def test_right_action_shifts_degree():
    wp = WeightPair(1, 2)
    alpha, beta, alpha_s, beta_s = gens(CTX)
    samples = [alpha, beta, multiply(beta, beta_s, CTX), multiply(alpha, beta, CTX)]
    for a in samples:
        degs = {degree(wp, idx) for idx in a.terms}
        assert len(degs) == 1
        (d,) = degs
        for letter, shift in (("e", -wp.s), ("f", wp.s), ("k", 0)):
            moved = right_act(letter, a, CTX)
            for idx in moved.terms:
                assert degree(wp, idx) == d + shift


@pytest.mark.parametrize("k,l", [(1, 1), (1, 2), (2, 3), (1, 4)])
def test_degree_additivity_of_products(k, l):
    wp = WeightPair(k, l)
    alpha, beta, alpha_s, beta_s = gens(CTX)
    homo = [alpha, beta, alpha_s, beta_s, multiply(alpha, beta, CTX)]
    for x in homo:
        for y in homo:
            dx = {degree(wp, i) for i in x.terms}
            dy = {degree(wp, i) for i in y.terms}
            prod = multiply(x, y, CTX)
            for idx in prod.terms:
                assert degree(wp, idx) == next(iter(dx)) + next(iter(dy))


# ---------------------------------------------------------------------------
# coinvariant bases


def test_coinvariant_coord_basis_examples():
    assert coinvariant_coord_basis(WeightPair(2, 3), hi(0)) == [BasisIndex.of(0, 0, 0)]
    lam1 = [
        idx
        for idx in coinvariant_coord_basis(WeightPair(1, 1), hi(1))
        if idx.lam.twice == 2
    ]
    assert {(i.m.twice, i.n.twice) for i in lam1} == {(-2, 0), (0, 0), (2, 0)}
    # half-integer levels below 3/2 are empty for (1, 2)
    small = coinvariant_coord_basis(WeightPair(1, 2), hi(1.0))
    assert [i for i in small if i.lam.twice == 1] == []


@pytest.mark.parametrize("k,l", [(1, 1), (1, 2), (2, 3), (3, 4)])
def test_coinvariant_coord_basis_is_degree_zero_scan(k, l):
    wp = WeightPair(k, l)
    fast = set(coinvariant_coord_basis(wp, hi(3)))
    brute = set(homogeneous_coord_basis(wp, 0, hi(3)))
    assert fast == brute


@pytest.mark.parametrize("k,l", [(1, 1), (1, 2), (2, 3)])
def test_coord_basis_cardinality_matches_dimensions(k, l):
    wp = WeightPair(k, l)
    count = len(coinvariant_coord_basis(wp, hi(8)))
    assert count == sum(dim_V(wp, hi(t / 2)) for t in range(17))


def test_spinor_index_validation():
    with pytest.raises(ValueError):
        CoinvariantSpinorIndex(hi(1), hi(0), "sideways")
    with pytest.raises(ValueError):
        CoinvariantSpinorIndex(hi(-1), hi(0), "up")


def test_spinor_basis_examples():
    for wp in (WeightPair(1, 1), WeightPair(1, 2)):
        basis = coinvariant_spinor_basis(wp, hi(3))
        assert not any(x.arrow == "down" and x.j.twice <= 1 for x in basis)
    down1 = [
        x
        for x in coinvariant_spinor_basis(WeightPair(1, 1), hi(1))
        if x.arrow == "down" and x.j.twice == 2
    ]
    assert {x.weight_value(WeightPair(1, 1)).twice for x in down1} == {0, 2}
    assert len(down1) == 2


def test_spinor_basis_recombination_oracle():
    # a (j, p, arrow) label is legal exactly when the constituent matrix
    # elements of its expansion exist (skipping boundary legs whose coupling
    # coefficient vanishes)
    for k, l in [(1, 1), (1, 2), (2, 3)]:
        wp = WeightPair(k, l)
        basis = set()
        s = wp.s
        for tj in range(0, 13):
            for tp in range(-12, 13):
                v2 = tp * s  # twice p(l+k)
                if (v2 - tj) % 2:
                    continue
                m2 = v2 - 1  # twice of p(l+k) - 1/2
                mu2 = tp * (l - k)  # twice of p(l-k)
                for arrow in ("down", "up"):
                    lam2 = tj - 1 if arrow == "down" else tj + 1
                    if lam2 < 0 or abs(m2) > lam2:
                        continue
                    legs = []
                    if arrow == "down":
                        if mu2 != tj:  # e_- leg survives unless mu = j
                            legs.append(mu2 + 1)
                        if mu2 != -tj:  # e_+ leg survives unless mu = -j
                            legs.append(mu2 - 1)
                    else:
                        legs = [mu2 + 1, mu2 - 1]
                    if abs(mu2) > tj:
                        continue
                    if all(abs(n2) <= lam2 for n2 in legs) and legs:
                        basis.add((tj, tp, arrow))
        fast = {
            (x.j.twice, x.p.twice, x.arrow)
            for x in coinvariant_spinor_basis(wp, hi(6))
        }
        assert fast == basis


# ---------------------------------------------------------------------------
# dimension formulas


@pytest.mark.parametrize("k,l", COPRIME_PAIRS)
def test_dimensions_match_oracles(k, l):
    wp = WeightPair(k, l)
    for t in range(0, 51):
        x = hi(t / 2)
        assert dim_V_down(wp, x) == dim_V_down_oracle(wp, x)
        assert dim_V(wp, x) == dim_V_oracle(wp, x)


@pytest.mark.parametrize("k,l", COPRIME_PAIRS)
def test_up_down_shift_identity(k, l):
    wp = WeightPair(k, l)
    for t in range(0, 41):
        j = hi(t / 2)
        assert dim_V_up_oracle(wp, j) == dim_V_down_oracle(wp, j + 1)


def test_dimension_examples():
    assert dim_V_down(WeightPair(1, 1), hi(0)) == 0
    assert dim_V_down(WeightPair(2, 3), hi(0)) == 0
    assert dim_V_down(WeightPair(1, 1), hi(2)) == 4
    assert dim_V_down(WeightPair(1, 2), hi(1.5)) == 1
    assert dim_V(WeightPair(1, 2), hi(1)) == 1
    assert dim_V(WeightPair(1, 1), hi(0)) == 1
    for t in range(0, 9, 2):
        assert dim_V(WeightPair(1, 1), hi(t / 2)) == t + 1  # 2*lam + 1


def test_dim_table_shape():
    rows = dim_table(WeightPair(1, 2), hi(3))
    assert all(row["match"] for row in rows)
    # odd k+l: half-integer rows included
    assert any(row["index"] == 1.5 for row in rows)
    rows = dim_table(WeightPair(1, 1), hi(3))
    # even k+l: integer rows only
    assert all(float(row["index"]).is_integer() for row in rows)

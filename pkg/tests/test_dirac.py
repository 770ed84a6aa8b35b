"""Spectral triples: spinor basis, spectra, summability, commutators, grading."""

import numpy as np
import pytest

from qwps.cg import cg_block
from qwps.coaction import (
    WeightPair,
    coinvariant_spinor_basis,
    dim_V_down_oracle,
    dim_V_oracle,
)
from qwps.coord import BasisIndex
from qwps.dirac import (
    SpectrumTable,
    SpinorBasisIndex,
    ambient_dirac_spectrum,
    chirality_checks,
    commutator_norm,
    even_triple_operators,
    even_triple_spectrum,
    fredholm_degeneracy,
    multiplication_commutator_coefficients,
    odd_triple_spectrum,
    q_dirac_check,
    spinor_basis,
    spinor_inner,
    spinor_vector,
    summability_partial_sum,
)
from qwps.operators import TruncatedOperator
from qwps.qcore import QContext, hi

CTX = QContext(0.5, 1e-9)
WPS = [WeightPair(1, 1), WeightPair(1, 2), WeightPair(2, 3)]


# ---------------------------------------------------------------------------
# spinor basis


def test_spinor_index_validation():
    with pytest.raises(ValueError):
        SpinorBasisIndex(hi(0), hi(0.5), hi(0), "down")  # down needs j >= 1/2
    with pytest.raises(ValueError):
        SpinorBasisIndex(hi(1), hi(0), hi(2), "up")  # |mu| > j
    with pytest.raises(ValueError):
        SpinorBasisIndex(hi(0.5), hi(1.5), hi(0.5), "up")  # |m| > j + 1/2
    idx = SpinorBasisIndex(hi(0.5), hi(0), hi(0.5), "down")
    assert idx.lam.twice == 0


def test_spinor_basis_counts_match_dirac_multiplicities():
    for tj in range(0, 6):
        j = hi(tj / 2)
        ups = [x for x in spinor_basis(j) if x.arrow == "up" and x.j == j]
        downs = [x for x in spinor_basis(j) if x.arrow == "down" and x.j == j]
        assert len(ups) == (tj + 1) * (tj + 2)
        assert len(downs) == tj * (tj + 1)


def test_boundary_spinor_has_single_leg():
    idx = SpinorBasisIndex(hi(0.5), hi(0), hi(0.5), "down")
    v = spinor_vector(idx, CTX)
    assert v.minus.norm_inf() == 0.0  # C vanishes at mu = j
    assert v.plus.norm_inf() > 0


@pytest.mark.parametrize("tj", range(0, 5))
def test_spinor_vectors_normalized(tj):
    for idx in spinor_basis(hi(tj / 2)):
        if idx.j.twice != tj:
            continue
        v = spinor_vector(idx, CTX)
        assert spinor_inner(v, v, CTX) == pytest.approx(1.0, abs=1e-10)


def test_spinor_vectors_orthogonal():
    basis = spinor_basis(hi(1.5))
    vecs = [spinor_vector(i, CTX) for i in basis]
    for i in range(len(basis)):
        for k in range(i + 1, len(basis)):
            assert abs(spinor_inner(vecs[i], vecs[k], CTX)) < 1e-10


# ---------------------------------------------------------------------------
# ambient spectrum and the q-Dirac block identity


def test_ambient_spectrum_examples():
    table = ambient_dirac_spectrum(hi(0))
    assert table.rows == ((1.5, 2),)
    table = ambient_dirac_spectrum(hi(0.5))
    assert table.multiplicity(2.5) == 6
    assert table.multiplicity(-1.5) == 2
    assert table.multiplicity(0.0) == 0


@pytest.mark.parametrize("tj", range(0, 7))
def test_ambient_spectrum_counts(tj):
    j_max = hi(tj / 2)
    assert ambient_dirac_spectrum(j_max).total() == len(spinor_basis(j_max))


def test_q_dirac_eigenvalues():
    assert q_dirac_check(hi(2), CTX) < 100 * CTX.tol


def test_q_dirac_guard():
    with pytest.raises(ValueError):
        q_dirac_check(hi(3.5), CTX)


# ---------------------------------------------------------------------------
# spectra of the two triples


def test_odd_spectrum_pairing_and_oracle():
    for wp in WPS:
        table = odd_triple_spectrum(wp, hi(20))
        for ev, mult in table.rows:
            assert table.multiplicity(-ev) == mult
            # ev = ±2(j+1), so the shifted level is j + 1 = |ev|/2
            assert mult == dim_V_down_oracle(wp, hi(abs(ev) / 2))


def test_odd_spectrum_unit_weights():
    table = odd_triple_spectrum(WeightPair(1, 1), hi(4))
    assert [(ev, m) for ev, m in table.rows if ev > 0] == [
        (2.0, 2),
        (4.0, 4),
        (6.0, 6),
        (8.0, 8),
        (10.0, 10),
    ]


def test_even_spectrum_examples():
    table = even_triple_spectrum(WeightPair(1, 1), hi(3))
    assert table.rows == (
        (-4.0, 7),
        (-3.0, 5),
        (-2.0, 3),
        (-1.0, 1),
        (1.0, 1),
        (2.0, 3),
        (3.0, 5),
        (4.0, 7),
    )
    for wp in WPS:
        assert even_triple_spectrum(wp, hi(0)).rows == ((-1.0, 1), (1.0, 1))
    table = even_triple_spectrum(WeightPair(2, 3), hi(12))
    for ev, mult in table.rows:
        assert mult == dim_V_oracle(WeightPair(2, 3), hi(abs(ev) - 1))


def test_spectrum_totals_match_enumeration():
    import math

    from qwps.coaction import coinvariant_coord_basis

    pairs = [
        WeightPair(k, l)
        for k in range(1, 7)
        for l in range(1, 7)
        if k + l <= 7 and math.gcd(k, l) == 1
    ]
    for wp in pairs:
        table = odd_triple_spectrum(wp, hi(20))
        # rows at ±2(j+1) for j <= 20 count the down labels at levels 1..21
        downs = [
            x
            for x in coinvariant_spinor_basis(wp, hi(21))
            if x.arrow == "down" and x.j.twice >= 2
        ]
        assert table.total() == 2 * len(downs)
        table = even_triple_spectrum(wp, hi(20))
        assert table.total() == 2 * len(coinvariant_coord_basis(wp, hi(20)))


def test_spectrum_table_validation():
    with pytest.raises(ValueError):
        SpectrumTable(((1.0, 0),))
    with pytest.raises(ValueError):
        SpectrumTable(((2.0, 1), (1.0, 1)))


def test_spectrum_serialization():
    table = even_triple_spectrum(WeightPair(1, 1), hi(1))
    csv = table.to_csv_text()
    assert csv.splitlines()[0] == "eigenvalue,multiplicity"
    assert len(csv.splitlines()) == 1 + len(table.rows)
    import json

    data = json.loads(table.to_json_text())
    assert data[0]["multiplicity"] == table.rows[0][1]


# ---------------------------------------------------------------------------
# summability


@pytest.mark.parametrize("triple", ["odd", "even"])
def test_summability_monotone(triple):
    wp = WeightPair(1, 2)
    values = [summability_partial_sum(wp, n, triple) for n in (8, 16, 32, 64)]
    assert all(b > a for a, b in zip(values, values[1:]))


@pytest.mark.parametrize("triple", ["odd", "even"])
@pytest.mark.parametrize("wp", WPS, ids=str)
def test_summability_log_divergence(wp, triple):
    s512 = summability_partial_sum(wp, 512, triple)
    s1024 = summability_partial_sum(wp, 1024, triple)
    s2048 = summability_partial_sum(wp, 2048, triple)
    d1, d2 = s1024 - s512, s2048 - s1024
    assert abs(d1 / d2 - 1.0) < 0.05


@pytest.mark.parametrize("triple", ["odd", "even"])
@pytest.mark.parametrize("wp", WPS, ids=str)
def test_summability_cube_converges(wp, triple):
    s512 = summability_partial_sum(wp, 512, triple, exponent=3)
    s1024 = summability_partial_sum(wp, 1024, triple, exponent=3)
    s2048 = summability_partial_sum(wp, 2048, triple, exponent=3)
    d1, d2 = s1024 - s512, s2048 - s1024
    assert d2 < d1
    assert d2 < 0.01 * s512


# ---------------------------------------------------------------------------
# commutator boundedness evidence


def test_commutator_coefficients_are_half_cg_products():
    for gen in ("alpha", "beta"):
        for idx in (BasisIndex.of(1, 0, 1), BasisIndex.of(1.5, 0.5, -0.5)):
            coeffs = multiplication_commutator_coefficients(gen, idx, CTX)
            assert coeffs
            block = cg_block(hi(0.5), idx.lam, CTX)
            a = hi(0.5)
            b = hi(0.5) if gen == "alpha" else hi(-0.5)
            for tgt, coeff in coeffs.items():
                sign = 0.5 if tgt.lam.twice > idx.lam.twice else -0.5
                cm = block.coeff(tgt.lam, tgt.m, a, idx.m)
                cn = block.coeff(tgt.lam, tgt.n, b, idx.n)
                assert coeff == pytest.approx(sign * cm * cn, abs=1e-13)


def test_commutator_norm_identity_is_zero():
    assert commutator_norm("one", hi(4), CTX) == 0.0


def test_commutator_norm_plateau_small():
    n10 = commutator_norm("alpha", hi(10), CTX)
    n20 = commutator_norm("alpha", hi(20), CTX)
    assert n20 >= n10 - 1e-8  # nondecreasing up to solver noise
    assert abs(n20 - n10) / n10 < 0.01


def test_commutator_norm_beta_bounded():
    n = commutator_norm("beta", hi(10), CTX)
    assert 0.1 < n < 1.0


# ---------------------------------------------------------------------------
# even triple: chirality and Fredholm degeneracy


@pytest.mark.parametrize("wp", WPS, ids=str)
def test_chirality_exact(wp):
    report = chirality_checks(wp, hi(3), CTX)
    assert report["max"] < 1e-12


@pytest.mark.parametrize("wp", WPS, ids=str)
def test_fredholm_exact(wp):
    report = fredholm_degeneracy(wp, hi(3), CTX)
    assert report["max"] < 1e-12


def test_even_triple_operators_structure():
    ops = even_triple_operators(WeightPair(1, 1), hi(2), CTX)
    d = ops["D"].matrix
    evals = np.sort(np.linalg.eigvalsh(d))
    # eigenvalues ±(lam+1) with multiplicity dim V_lam
    expected = []
    for tl in range(0, 5):
        mult = dim_V_oracle(WeightPair(1, 1), hi(tl / 2))
        expected += [tl / 2.0 + 1.0] * mult + [-(tl / 2.0 + 1.0)] * mult
    assert np.allclose(evals, np.sort(expected), atol=1e-12)


def test_even_triple_nonzero_order_component():
    # the construction extends to any homogeneous component
    report = chirality_checks(WeightPair(1, 2), hi(3), CTX, order=2)
    assert report["max"] < 1e-12
    report = fredholm_degeneracy(WeightPair(1, 2), hi(3), CTX, order=2)
    assert report["max"] < 1e-12


def test_coinvariant_spinors_are_ambient_eigenvectors():
    # the coinvariant labels are legal ambient kets whose legs carry the
    # degrees cancelling the spin-1/2 coaction orders (-k on e_+, l on e_-);
    # the ambient Dirac is diagonal on them, and after the +1/2 shift the
    # eigenvalue is exactly ±2(j+1)
    from qwps.coaction import degree

    for wp in WPS:
        for label in coinvariant_spinor_basis(wp, hi(3)):
            m = label.p * wp.s - hi(0.5)
            mu = label.p * (wp.l - wp.k)
            idx = SpinorBasisIndex(label.j, m, mu, label.arrow)
            vec = spinor_vector(idx, CTX)
            for term in vec.plus.terms:
                assert degree(wp, term) == wp.k
            for term in vec.minus.terms:
                assert degree(wp, term) == -wp.l
            j = float(label.j)
            if label.arrow == "up":
                ambient = 2 * j + 1.5
                assert ambient + 0.5 == 2 * (j + 1)
            else:
                ambient = -(2 * j + 0.5)
                assert ambient + 0.5 == -2 * ((j - 1) + 1)


def test_truncated_operator_shape_check():
    with pytest.raises(ValueError):
        TruncatedOperator(("a", "b"), np.zeros((3, 3)))

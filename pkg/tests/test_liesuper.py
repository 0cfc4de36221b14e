from fractions import Fraction
import itertools

import pytest
from hypothesis import given, strategies as st

from superw.liesuper import (
    AlgebraSpec,
    Family,
    LieBasis,
    bilinear_form,
    grading_degree,
    graded_dimensions,
    kerf_basis,
    kernel_of_ad_f,
    lie_bracket,
    rank,
    subalgebra_of,
)

ALL_SMALL = [
    (Family.GL_PLUS, 1), (Family.GL_PLUS, 2), (Family.GL_MINUS, 2),
    (Family.SL_PLUS, 1), (Family.SL_MINUS, 2),
    (Family.OSP_ODD_PLUS, 1), (Family.OSP_ODD_PLUS, 2),
    (Family.OSP_ODD_MINUS, 1), (Family.OSP_ODD_MINUS, 2),
    (Family.OSP_EVEN, 1), (Family.OSP_EVEN, 2),
    (Family.OSP_EVEN_PLUS, 1), (Family.OSP_EVEN_PLUS, 2),
]
OSP = [(f, n) for f, n in ALL_SMALL if f.is_osp]


def spec(f, n):
    return AlgebraSpec(f, n)


def super_dims(s):
    """(m, 2n) of the defining superspace."""
    even = sum(1 for i in s.indices if s.parity(i) == 0)
    return even, s.size - even


# -- index data --------------------------------------------------------------------


def test_parity_examples():
    assert AlgebraSpec(Family.GL_PLUS, 1).parity(2) == 1
    assert AlgebraSpec(Family.GL_MINUS, 2).parity(1) == 1
    assert AlgebraSpec(Family.OSP_EVEN, 1).parity(1) == 1


def test_parity_sets_match_presentations():
    s = AlgebraSpec(Family.GL_PLUS, 2)
    assert [i for i in s.indices if s.parity(i)] == [2, 4]
    s = AlgebraSpec(Family.GL_MINUS, 2)
    assert [i for i in s.indices if s.parity(i)] == [1, 3]
    s = AlgebraSpec(Family.OSP_EVEN, 2)
    assert [i for i in s.indices if not s.parity(i)] == [2, 4, 5, 7]


def test_delta_examples():
    assert AlgebraSpec(Family.OSP_ODD_PLUS, 1).delta(4) == 1
    assert AlgebraSpec(Family.OSP_ODD_PLUS, 1).delta(1) == 0
    assert AlgebraSpec(Family.OSP_EVEN, 1).delta(1) == 1
    with pytest.raises(ValueError):
        AlgebraSpec(Family.GL_PLUS, 1).delta(1)


def test_index_range_checked():
    with pytest.raises(IndexError):
        AlgebraSpec(Family.GL_PLUS, 1).parity(4)


def test_rank_validation():
    with pytest.raises(ValueError):
        AlgebraSpec(Family.GL_MINUS, 1)
    with pytest.raises(ValueError):
        AlgebraSpec(Family.OSP_EVEN, 0)


@pytest.mark.parametrize("f,n,name", [
    (Family.GL_PLUS, 1, "gl(2|1)"), (Family.GL_MINUS, 2, "gl(1|2)"), (Family.SL_PLUS, 2, "sl(3|2)"),
    (Family.OSP_ODD_PLUS, 1, "osp(3|2)"), (Family.OSP_ODD_MINUS, 1, "osp(1|2)"),
    (Family.OSP_EVEN, 1, "osp(2|2)"), (Family.OSP_EVEN_PLUS, 1, "osp(4|2)"),
])
def test_names_match_superdimension(f, n, name):
    s = AlgebraSpec(f, n)
    assert s.name == name
    m, k = super_dims(s)
    assert name.endswith(f"({m}|{k})")


# -- brackets and forms --------------------------------------------------------------


def test_bracket_examples(gl21):
    e = gl21.unit
    assert lie_bracket(e(1, 2), e(2, 1)) == e(1, 1) + e(2, 2)
    assert lie_bracket(e(1, 1), e(1, 1)).is_zero()
    assert lie_bracket(e(1, 2), e(2, 3)) == e(1, 3)


def test_form_examples(gl21):
    e = gl21.unit
    assert bilinear_form(e(1, 2), e(2, 1)) == 1
    assert bilinear_form(e(2, 1), e(1, 2)) == -1
    assert bilinear_form(e(1, 1), e(2, 2)) == 0


@pytest.mark.parametrize("f,n", [(Family.GL_PLUS, 1), (Family.GL_MINUS, 2), (Family.OSP_ODD_PLUS, 1),
                                 (Family.OSP_EVEN, 1), (Family.OSP_EVEN_PLUS, 1), (Family.SL_PLUS, 1)])
def test_superalgebra_axioms_on_basis(f, n):
    s = spec(f, n)
    B = s.basis.elements
    for a, b in itertools.product(B, repeat=2):
        pa, pb = a.parity, b.parity
        assert lie_bracket(a, b) == lie_bracket(b, a) * (-(-1) ** (pa * pb))
        # supersymmetric and even
        assert bilinear_form(a, b) == (-1) ** (pa * pb) * bilinear_form(b, a)
        if pa != pb:
            assert bilinear_form(a, b) == 0
    for a, b, c in itertools.product(B, repeat=3):
        pa, pb = a.parity, b.parity
        lhs = lie_bracket(a, lie_bracket(b, c))
        rhs = lie_bracket(lie_bracket(a, b), c) + lie_bracket(b, lie_bracket(a, c)) * (-1) ** (pa * pb)
        assert lhs == rhs
        assert bilinear_form(lie_bracket(a, b), c) == bilinear_form(a, lie_bracket(b, c))


@pytest.mark.parametrize("f,n", OSP)
def test_theta_is_automorphism(f, n):
    s = spec(f, n)
    units = [s.unit(i, j) for i in s.indices for j in s.indices]
    for a, b in itertools.product(units, repeat=2):
        assert s.theta(lie_bracket(a, b)) == lie_bracket(s.theta(a), s.theta(b))


@pytest.mark.parametrize("f,n", OSP)
def test_folded_basis(f, n):
    s = spec(f, n)
    Fs = [s.fold_F(i, j) for i, j in s.osp_index_set]
    assert all(s.in_osp(F) for F in Fs)
    vecs = [[F[(i, j)] for i in s.indices for j in s.indices] for F in Fs]
    m, k = super_dims(s)
    dim = m * (m - 1) // 2 + (k // 2) * (k + 1) + m * k
    assert len(Fs) == dim
    assert rank(vecs, s.size ** 2) == dim


@pytest.mark.parametrize("f,n", OSP)
def test_fold_symmetry_and_vanishing(f, n):
    s = spec(f, n)
    for i in s.indices:
        for j in s.indices:
            assert s.fold_F(s.conj(j), s.conj(i)) == s.fold_F(i, j) * s.tau(i, j)
        if s.parity(i) == 0:
            assert s.fold_F(i, s.conj(i)).is_zero()


def test_fold_example():
    s = AlgebraSpec(Family.OSP_ODD_PLUS, 1)
    assert s.fold_F(2, 1) == s.unit(2, 1) - s.unit(5, 4)


def test_principal_f_examples(gl21):
    assert gl21.f == gl21.unit(2, 1) + gl21.unit(3, 2)
    s = AlgebraSpec(Family.OSP_ODD_PLUS, 1)
    assert s.f == s.fold_F(2, 1) + s.fold_F(3, 2)
    s = AlgebraSpec(Family.OSP_EVEN, 1)
    assert s.f == s.fold_F(3, 1) + s.fold_F(2, 1)


@pytest.mark.parametrize("f,n", ALL_SMALL)
def test_f_is_odd_of_degree_minus_half(f, n):
    s = spec(f, n)
    assert s.f.parity == 1
    assert grading_degree(s.f) == Fraction(-1, 2)
    assert subalgebra_of(s.f) == "n-"


def test_degree_examples(gl21):
    assert grading_degree(gl21.unit(1, 3)) == 1
    assert subalgebra_of(gl21.unit(1, 3)) == "n"
    assert grading_degree(gl21.unit(2, 2)) == 0


@pytest.mark.parametrize("f,n", [(Family.SL_PLUS, 1), (Family.SL_MINUS, 2), (Family.SL_PLUS, 2)])
def test_sl_basis_supertraceless(f, n):
    s = spec(f, n)
    assert all(x.supertrace() == 0 for x in s.basis.elements)
    assert len(s.basis) == s.size ** 2 - 1


# -- centralizer of f -------------------------------------------------------------


@pytest.mark.parametrize("f,n", ALL_SMALL)
def test_kerf_basis_properties(f, n):
    s = spec(f, n)
    kb = kerf_basis(s)
    assert all(lie_bracket(s.f, v).is_zero() for v in kb.values())
    assert len(kb) == graded_dimensions(s)[0]
    vecs = [[v[(i, j)] for i in s.indices for j in s.indices] for v in kb.values()]
    assert rank(vecs, s.size ** 2) == len(kb)


def test_osp_even_tilde_vector():
    for n in (1, 2):
        s = AlgebraSpec(Family.OSP_EVEN, n)
        kb = kerf_basis(s)
        assert kb[f"vt{2 * n}"] == s.fold_E(2 * n, 1) - s.fold_E(2 * n + 1, 1)
        assert len(kb) == 2 * n


@pytest.mark.parametrize("n", [1, 2])
def test_osp_odd_vanishing_v(n):
    from superw.liesuper import _v_osp_odd
    s = AlgebraSpec(Family.OSP_ODD_PLUS, n)
    for k in range(1, s.size + 1):
        v = _v_osp_odd(s, k)
        if k % 4 in (1, 2):
            assert v.is_zero()
        else:
            assert not v.is_zero() and lie_bracket(s.f, v).is_zero()


@pytest.mark.parametrize("n", [1, 2])
def test_T_two_forms(n):
    s = AlgebraSpec(Family.OSP_EVEN, n)
    for k in range(0, 2 * n + 1):
        for i in range(k + 1, 2 * n + 1):
            assert s.T(i, k) == (i + 1) // 2 - (k + 1) // 2
    assert s.T(1, 3) == 0


@given(st.sampled_from(ALL_SMALL), st.data())
def test_bracket_respects_grading(fn, data):
    s = spec(*fn)
    B = s.basis
    a = data.draw(st.sampled_from(range(len(B))))
    b = data.draw(st.sampled_from(range(len(B))))
    c = lie_bracket(B.elements[a], B.elements[b])
    if not c.is_zero():
        assert c.degree2 == B.degrees2[a] + B.degrees2[b]
        assert c.parity == (B.parities[a] + B.parities[b]) % 2

from fractions import Fraction
import itertools

import pytest
from hypothesis import given, strategies as st

from superpoly_helpers import perm_sign
from strategies import homogeneous, polys, pva_for, pvas, symbols
from superw.liesuper import Family
from superw.superpoly import (
    DiffPoly,
    InhomogeneousError,
    apply_D,
    apply_D_power,
    delta_weight,
    linear_part,
    multiply,
    normalize,
    split_parity,
)


def odd_even(pva):
    odd = next(s for s in pva.symbols if s.parity == 1)
    even = next(s for s in pva.symbols if s.parity == 0)
    return odd, even


def test_symbol_parity_and_weight(pva_gl21):
    # e_11 is even in gl(2|1), so its bar symbol is odd; e_12 is odd, bar is even
    s11, s12, s21 = pva_gl21.sym("e[1,1]"), pva_gl21.sym("e[1,2]"), pva_gl21.sym("e[2,1]")
    assert (s11.parity, s12.parity) == (1, 0)
    assert s11.derive(1).parity == 0
    # weight 1/2 - j_a: e_21 has j = -1/2, e_11 has j = 0
    assert Fraction(s21.wt2, 2) == 1
    assert Fraction(s11.wt2, 2) == Fraction(1, 2)


def test_normalize_odd_swap(pva_gl21):
    a, b = sorted(s for s in pva_gl21.symbols if s.parity == 1)[:2]
    assert normalize([b, a]) == (-1, (a, b))


def test_normalize_odd_square(pva_gl21):
    a, _ = odd_even(pva_gl21)
    assert normalize([a, a]) == (0, None)


def test_normalize_even_square(pva_gl21):
    _, e = odd_even(pva_gl21)
    assert normalize([e, e]) == (1, (e, e))


def test_supercommuting_with_an_even_factor(pva_gl21):
    a, e = odd_even(pva_gl21)
    pa, pe = DiffPoly.sym(a), DiffPoly.sym(e)
    assert pa * pe + pe * pa == (pa * pe).scale(2)


def test_odd_square_vanishes(pva_gl21):
    a, _ = odd_even(pva_gl21)
    assert (DiffPoly.sym(a) * DiffPoly.sym(a)).is_zero()


def test_shifted_odd_square(pva_gl21):
    a, _ = odd_even(pva_gl21)
    x = DiffPoly.sym(a) + 1
    assert x * x == DiffPoly.sym(a).scale(2) + 1


def test_D_on_product_and_constant(pva_gl21):
    a, e = odd_even(pva_gl21)
    pa, pe = DiffPoly.sym(a), DiffPoly.sym(e)
    # D(a e) = a' e + (-1)^{p(a)} a e'
    want = DiffPoly.sym(a.derive()) * pe - pa * DiffPoly.sym(e.derive())
    assert apply_D(pa * pe) == want
    assert apply_D(DiffPoly.const(5)).is_zero()


def test_weight_examples(pva_gl21):
    e21 = pva_gl21.var("e[2,1]")
    assert delta_weight(e21) == 1
    assert delta_weight(apply_D(e21)) == Fraction(3, 2)
    with pytest.raises(InhomogeneousError):
        delta_weight(pva_gl21.var("e[1,1]") + e21)


def test_linear_part_examples(pva_gl21):
    a, b = pva_gl21.var("e[1,1]"), pva_gl21.var("e[2,1]")
    assert linear_part(a + apply_D(b) + a * b) == a
    assert linear_part(apply_D(a)).is_zero()


def test_render_format(pva_gl21):
    s = pva_gl21.sym("e[1,2]", 2)
    assert DiffPoly.sym(s, Fraction(-1, 2)).render() == "(-1/2)*e[1,2]^(2)"
    assert DiffPoly.sym(pva_gl21.sym("e[1,2]")).render() == "(1)*e[1,2]"


@given(st.data())
def test_normalize_sign_matches_odd_permutation_parity(data):
    pva = data.draw(pvas)
    syms = data.draw(st.lists(symbols(pva), min_size=1, max_size=5))
    sign, mono = normalize(syms)
    odd = [s for s in syms if s.parity]
    if len(set(odd)) < len(odd):
        assert sign == 0
        return
    assert list(mono) == sorted(syms)
    # oracle: parity of the permutation sorting the odd subsequence
    assert sign == perm_sign(odd)
    perm = data.draw(st.permutations(syms))
    sign2, mono2 = normalize(perm)
    assert mono2 == mono and sign2 == perm_sign([s for s in perm if s.parity])


@given(st.data())
def test_supercommutativity(data):
    pva = data.draw(pvas)
    p, q = data.draw(homogeneous(pva)), data.draw(homogeneous(pva))
    assert p * q == (q * p).scale((-1) ** (p.parity * q.parity))


@given(st.data())
def test_associativity(data):
    pva = data.draw(pvas)
    p, q, r = (data.draw(polys(pva)) for _ in range(3))
    assert multiply(multiply(p, q), r) == multiply(p, multiply(q, r))


@given(st.data())
def test_D_is_odd_derivation(data):
    pva = data.draw(pvas)
    p, q = data.draw(homogeneous(pva)), data.draw(polys(pva))
    assert apply_D(p * q) == apply_D(p) * q + (p * apply_D(q)).scale((-1) ** p.parity)


@given(st.data())
def test_D_squared_is_even_derivation(data):
    pva = data.draw(pvas)
    p, q = data.draw(polys(pva)), data.draw(polys(pva))
    D2 = lambda x: apply_D_power(x, 2)
    assert D2(p * q) == D2(p) * q + p * D2(q)


@given(st.data())
def test_weight_additive_and_shifted_by_D(data):
    pva = data.draw(pvas)
    p, q = data.draw(homogeneous(pva)), data.draw(homogeneous(pva))
    pq = p * q
    if pq:
        assert delta_weight(pq) == delta_weight(p) + delta_weight(q)
    Dp = apply_D(p)
    if Dp:
        assert delta_weight(Dp) == delta_weight(p) + Fraction(1, 2)


@given(st.data())
def test_split_parity_recombines(data):
    pva = data.draw(pvas)
    p = data.draw(polys(pva))
    even, odd = split_parity(p)
    assert even + odd == p
    assert even.parity == 0
    assert odd.is_zero() or odd.parity == 1

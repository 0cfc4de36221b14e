"""Hypothesis strategies over the affine algebras of small families."""

from functools import lru_cache

from hypothesis import strategies as st

from superw.chibra import AffinePVA
from superw.dops import DOp
from superw.liesuper import AlgebraSpec, Family
from superw.superpoly import DiffPoly

SMALL = [
    (Family.GL_PLUS, 1),
    (Family.OSP_ODD_PLUS, 1),
    (Family.OSP_EVEN, 1),
]


@lru_cache(maxsize=None)
def pva_for(fam, n, level=1):
    return AffinePVA(AlgebraSpec(fam, n), level)


pvas = st.sampled_from(SMALL).map(lambda fn: pva_for(*fn))

coeffs = st.sampled_from([-3, -2, -1, 1, 2, 3])


def symbols(pva, max_deriv=2):
    return st.tuples(st.sampled_from(pva.symbols), st.integers(0, max_deriv)).map(lambda t: t[0].derive(t[1]))


def monomials(pva, max_len=3, max_deriv=2):
    return st.builds(
        lambda syms, c: DiffPoly.from_raw(syms, c),
        st.lists(symbols(pva, max_deriv), min_size=0, max_size=max_len),
        coeffs,
    )


def homogeneous(pva, parity=None, max_len=3, max_deriv=2):
    """A nonzero monomial, optionally of a given parity."""
    s = monomials(pva, max_len, max_deriv).filter(lambda p: bool(p))
    if parity is not None:
        s = s.filter(lambda p: p.parity == parity)
    return s


def polys(pva, max_terms=3, max_len=3, max_deriv=2):
    return st.lists(monomials(pva, max_len, max_deriv), min_size=1, max_size=max_terms).map(
        lambda ms: sum(ms, DiffPoly())
    )


@st.composite
def operators(draw, pva, parity=None, lo=0, hi=2, max_len=2):
    """Homogeneous sum a_i D^i with lo <= i <= hi."""
    parity = draw(st.integers(0, 1)) if parity is None else parity
    terms = {}
    for i in range(lo, hi + 1):
        if draw(st.booleans()):
            terms[(0, i)] = draw(homogeneous(pva, (parity + i) % 2, max_len=max_len, max_deriv=1))
    if not terms:
        terms[(0, hi)] = draw(homogeneous(pva, (parity + hi) % 2, max_len=max_len, max_deriv=1))
    return DOp(terms), parity


@st.composite
def homogeneous_sums(draw, pva, max_terms=2, max_len=2, max_deriv=2):
    """A sum of monomials sharing one parity (may cancel to zero)."""
    parity = draw(st.integers(0, 1))
    parts = draw(st.lists(homogeneous(pva, parity, max_len, max_deriv), min_size=1, max_size=max_terms))
    return sum(parts, DiffPoly())

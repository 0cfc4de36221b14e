"""Free supercommutative differential algebra on the symbols a^(m).

A monomial is a sorted tuple of ``Symbol``s; a ``DiffPoly`` maps monomials to
nonzero ``Fraction`` coefficients.  The empty monomial is the constant 1.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Iterable, List, NamedTuple, Optional, Sequence, Tuple


class Symbol(NamedTuple):
    """Derivative ``m`` of the generator attached to basis position ``idx``.

    ``base_parity`` is the parity of the underived symbol (p(a) + 1) and
    ``base_wt2`` is twice its conformal weight (1 - 2 j_a).
    """

    idx: int
    m: int
    base_parity: int
    base_wt2: int
    label: str

    @property
    def parity(self) -> int:
        return (self.base_parity + self.m) % 2

    @property
    def wt2(self) -> int:
        return self.base_wt2 + self.m

    def derive(self, k: int = 1) -> "Symbol":
        return self._replace(m=self.m + k)

    def render(self) -> str:
        return self.label if self.m == 0 else f"{self.label}^({self.m})"


Monomial = Tuple[Symbol, ...]

ONE: Monomial = ()


def normalize(raw: Sequence[Symbol]) -> Tuple[int, Optional[Monomial]]:
    """Sort a product of symbols, returning the Koszul sign and the sorted monomial.

    Returns ``(0, None)`` when an odd symbol occurs twice.
    """
    items = list(raw)
    sign = 1
    # insertion sort; each swap of two odd neighbours flips the sign
    for i in range(1, len(items)):
        j = i
        while j > 0 and items[j - 1] > items[j]:
            a, b = items[j - 1], items[j]
            if a.parity and b.parity:
                sign = -sign
            items[j - 1], items[j] = b, a
            j -= 1
    for a, b in zip(items, items[1:]):
        if a == b and a.parity:
            return 0, None
    return sign, tuple(items)


def monomial_parity(mono: Monomial) -> int:
    return sum(s.parity for s in mono) % 2


def monomial_wt2(mono: Monomial) -> int:
    return sum(s.wt2 for s in mono)


def _merge(u: Monomial, v: Monomial) -> Tuple[int, Optional[Monomial]]:
    if not u:
        return 1, v
    if not v:
        return 1, u
    # both sorted: count odd pairs (x in u, y in v) with y < x
    sign = 1
    out: List[Symbol] = []
    i = j = 0
    odd_left = sum(1 for s in u if s.parity)
    while i < len(u) and j < len(v):
        x, y = u[i], v[j]
        if x == y and x.parity:
            return 0, None
        if y < x:
            if y.parity and odd_left % 2:
                sign = -sign
            out.append(y)
            j += 1
        else:
            if x.parity:
                odd_left -= 1
            out.append(x)
            i += 1
    out.extend(u[i:])
    out.extend(v[j:])
    return sign, tuple(out)


class DiffPoly:
    """Element of the differential polynomial superalgebra with rational coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms: Optional[Dict[Monomial, Fraction]] = None):
        self.terms: Dict[Monomial, Fraction] = {}
        if terms:
            for k, v in terms.items():
                if v:
                    self.terms[k] = Fraction(v)

    @classmethod
    def _raw(cls, terms: Dict[Monomial, Fraction]) -> "DiffPoly":
        out = cls.__new__(cls)
        out.terms = terms
        return out

    @classmethod
    def const(cls, c) -> "DiffPoly":
        return cls({ONE: Fraction(c)}) if c else cls()

    @classmethod
    def sym(cls, s: Symbol, coeff=1) -> "DiffPoly":
        return cls({(s,): Fraction(coeff)})

    @classmethod
    def from_raw(cls, raw: Sequence[Symbol], coeff=1) -> "DiffPoly":
        sign, mono = normalize(raw)
        if not sign:
            return cls()
        return cls({mono: Fraction(coeff) * sign})

    # -- arithmetic -------------------------------------------------------

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = DiffPoly.const(other)
        return isinstance(other, DiffPoly) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other: "DiffPoly") -> "DiffPoly":
        if isinstance(other, (int, Fraction)):
            other = DiffPoly.const(other)
        out = dict(self.terms)
        for k, v in other.terms.items():
            c = out.get(k, 0) + v
            if c:
                out[k] = c
            else:
                out.pop(k, None)
        return DiffPoly._raw(out)

    __radd__ = __add__

    def __neg__(self) -> "DiffPoly":
        return DiffPoly._raw({k: -v for k, v in self.terms.items()})

    def __sub__(self, other: "DiffPoly") -> "DiffPoly":
        if isinstance(other, (int, Fraction)):
            other = DiffPoly.const(other)
        return self + (-other)

    def __rsub__(self, other) -> "DiffPoly":
        return DiffPoly.const(other) - self

    def scale(self, c) -> "DiffPoly":
        if not c:
            return DiffPoly()
        c = Fraction(c)
        return DiffPoly._raw({k: v * c for k, v in self.terms.items()})

    def __mul__(self, other) -> "DiffPoly":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return multiply(self, other)

    def __rmul__(self, other) -> "DiffPoly":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    # -- structure --------------------------------------------------------

    @property
    def parity(self) -> Optional[int]:
        ps = {monomial_parity(m) for m in self.terms}
        if len(ps) > 1:
            return None
        return ps.pop() if ps else 0

    def constant_term(self) -> Fraction:
        return self.terms.get(ONE, Fraction(0))

    def symbols(self) -> set:
        return {s for m in self.terms for s in m}

    def substitute(self, rule) -> "DiffPoly":
        """Apply an algebra homomorphism given on symbols by ``rule(symbol) -> DiffPoly``."""
        out = DiffPoly()
        cache: Dict[Symbol, DiffPoly] = {}
        for mono, c in self.terms.items():
            acc = DiffPoly.const(c)
            for s in mono:
                if s not in cache:
                    cache[s] = rule(s)
                acc = multiply(acc, cache[s])
                if not acc:
                    break
            out = out + acc
        return out

    def render(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for mono in sorted(self.terms):
            c = self.terms[mono]
            body = "*".join(s.render() for s in mono)
            parts.append(f"{c}" if not body else f"({c})*{body}")
        return " + ".join(parts)

    def __repr__(self) -> str:
        return self.render()


def multiply(p: DiffPoly, q: DiffPoly) -> DiffPoly:
    out: Dict[Monomial, Fraction] = {}
    for u, a in p.terms.items():
        for v, b in q.terms.items():
            sign, mono = _merge(u, v)
            if not sign:
                continue
            c = out.get(mono, 0) + sign * a * b
            if c:
                out[mono] = c
            else:
                out.pop(mono, None)
    return DiffPoly._raw(out)


def apply_D(p: DiffPoly) -> DiffPoly:
    """The odd derivation D, with D(a^(m)) = a^(m+1)."""
    out = DiffPoly()
    for mono, c in p.terms.items():
        sign = 1
        for k, s in enumerate(mono):
            raw = mono[:k] + (s.derive(),) + mono[k + 1:]
            out = out + DiffPoly.from_raw(raw, c * sign)
            if s.parity:
                sign = -sign
    return out


def apply_D_power(p: DiffPoly, k: int) -> DiffPoly:
    for _ in range(k):
        p = apply_D(p)
    return p


class InhomogeneousError(ValueError):
    pass


def delta_weight(p: DiffPoly) -> Fraction:
    """Conformal weight; raises when monomials of different weights are mixed."""
    weights: Dict[int, List[Monomial]] = {}
    for mono in p.terms:
        weights.setdefault(monomial_wt2(mono), []).append(mono)
    if len(weights) > 1:
        detail = "; ".join(
            f"weight {Fraction(w, 2)}: " + ", ".join("*".join(s.render() for s in m) or "1" for m in ms[:3])
            for w, ms in sorted(weights.items())
        )
        raise InhomogeneousError(f"mixed conformal weights ({detail})")
    if not weights:
        return Fraction(0)
    return Fraction(next(iter(weights)), 2)


def linear_part(p: DiffPoly) -> DiffPoly:
    """Degree-one monomials that are not derivatives."""
    return DiffPoly._raw({m: c for m, c in p.terms.items() if len(m) == 1 and m[0].m == 0})


def split_parity(p: DiffPoly) -> Tuple[DiffPoly, DiffPoly]:
    """(even part, odd part) of p."""
    even: Dict[Monomial, Fraction] = {}
    odd: Dict[Monomial, Fraction] = {}
    for mono, c in p.terms.items():
        (odd if monomial_parity(mono) else even)[mono] = c
    return DiffPoly._raw(even), DiffPoly._raw(odd)

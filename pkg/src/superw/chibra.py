"""The chi-bracket of the affine SUSY Poisson vertex algebra and its checks.

``chi`` and ``gamma`` are odd formal variables.  They are always stored as
exponents on the left of a ``DiffPoly`` coefficient, so ``ChiPoly({n: r})`` is
``chi^n r``.  The relation ``D chi + chi D = -2 chi^2`` is applied whenever D
has to move past a power of chi.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from .liesuper import AlgebraSpec, LieBasis, SuperElement, bilinear_form, lie_bracket
from .superpoly import (
    DiffPoly,
    Monomial,
    Symbol,
    apply_D,
    monomial_parity,
    split_parity,
    multiply,
)


def _acc(store: dict, key, value: DiffPoly) -> None:
    if not value:
        return
    cur = store.get(key)
    new = value if cur is None else cur + value
    if new:
        store[key] = new
    else:
        store.pop(key, None)


def _left_mul_signed(left: DiffPoly, right: DiffPoly, n: int) -> DiffPoly:
    """``left * chi^n * right`` with chi^n pulled out to the left."""
    if n % 2 == 0:
        return multiply(left, right)
    out = DiffPoly()
    for mono, c in left.terms.items():
        s = -1 if monomial_parity(mono) else 1
        out = out + multiply(DiffPoly._raw({mono: c * s}), right)
    return out


_sign_split = split_parity


class ChiPoly:
    """Finite sum of ``chi^n r_n`` with chi on the left."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Optional[Dict[int, DiffPoly]] = None):
        self.coeffs: Dict[int, DiffPoly] = {k: v for k, v in (coeffs or {}).items() if v}

    @classmethod
    def scalar(cls, p: DiffPoly) -> "ChiPoly":
        return cls({0: p})

    def is_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other) -> bool:
        return isinstance(other, ChiPoly) and self.coeffs == other.coeffs

    def __add__(self, other: "ChiPoly") -> "ChiPoly":
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            _acc(out, k, v)
        return ChiPoly(out)

    def __neg__(self) -> "ChiPoly":
        return ChiPoly({k: -v for k, v in self.coeffs.items()})

    def __sub__(self, other: "ChiPoly") -> "ChiPoly":
        return self + (-other)

    def scale(self, c) -> "ChiPoly":
        return ChiPoly({k: v.scale(c) for k, v in self.coeffs.items()})

    def chi_left(self, k: int = 1) -> "ChiPoly":
        return ChiPoly({n + k: v for n, v in self.coeffs.items()})

    def left_mul(self, left: DiffPoly) -> "ChiPoly":
        """``left * self`` re-normalized with chi on the left."""
        return ChiPoly({n: _left_mul_signed(left, r, n) for n, r in self.coeffs.items()})

    def right_mul(self, right: DiffPoly) -> "ChiPoly":
        return ChiPoly({n: multiply(r, right) for n, r in self.coeffs.items()})

    def apply_D(self) -> "ChiPoly":
        out: Dict[int, DiffPoly] = {}
        for n, r in self.coeffs.items():
            dr = apply_D(r)
            _acc(out, n, dr if n % 2 == 0 else -dr)
            if n % 2:
                _acc(out, n + 1, r.scale(-2))
        return ChiPoly(out)

    def D_plus_chi(self) -> "ChiPoly":
        return self.apply_D() + self.chi_left()

    def map(self, fn: Callable[[DiffPoly], DiffPoly]) -> "ChiPoly":
        return ChiPoly({n: fn(r) for n, r in self.coeffs.items()})

    @property
    def max_power(self) -> int:
        return max(self.coeffs, default=-1)

    def render(self) -> str:
        if not self.coeffs:
            return "0"
        return " + ".join(
            f"chi^{n}*[{r.render()}]" if n else f"[{r.render()}]" for n, r in sorted(self.coeffs.items())
        )

    __repr__ = render


class ChiGammaPoly:
    """Finite sum of ``chi^a gamma^b r`` with chi before gamma."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Optional[Dict[Tuple[int, int], DiffPoly]] = None):
        self.coeffs = {k: v for k, v in (coeffs or {}).items() if v}

    def is_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other) -> bool:
        return isinstance(other, ChiGammaPoly) and self.coeffs == other.coeffs

    def __add__(self, other: "ChiGammaPoly") -> "ChiGammaPoly":
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            _acc(out, k, v)
        return ChiGammaPoly(out)

    def __neg__(self) -> "ChiGammaPoly":
        return ChiGammaPoly({k: -v for k, v in self.coeffs.items()})

    def __sub__(self, other: "ChiGammaPoly") -> "ChiGammaPoly":
        return self + (-other)

    def scale(self, c) -> "ChiGammaPoly":
        return ChiGammaPoly({k: v.scale(c) for k, v in self.coeffs.items()})

    def render(self) -> str:
        if not self.coeffs:
            return "0"
        return " + ".join(f"chi^{a}*gamma^{b}*[{r.render()}]" for (a, b), r in sorted(self.coeffs.items()))

    __repr__ = render


def _chi_plus_gamma_powers(m: int) -> Dict[Tuple[int, int], int]:
    """(chi + gamma)^m written as sum of chi^a gamma^b."""
    cur = {(0, 0): 1}
    for _ in range(m):
        nxt: Dict[Tuple[int, int], int] = {}
        for (a, b), c in cur.items():
            nxt[(a + 1, b)] = nxt.get((a + 1, b), 0) + c
            # gamma chi^a = (-1)^a chi^a gamma
            s = -c if a % 2 else c
            nxt[(a, b + 1)] = nxt.get((a, b + 1), 0) + s
        cur = {k: v for k, v in nxt.items() if v}
    return cur


class AffinePVA:
    """Affine SUSY PVA on the Lie superalgebra of ``spec`` at level ``k``.

    Symbols are indexed by positions in ``spec.basis``.
    """

    def __init__(self, spec: AlgebraSpec, level=1, basis: Optional[LieBasis] = None):
        self.spec = spec
        self.level = Fraction(level)
        self.basis = basis if basis is not None else spec.basis
        b = self.basis
        self.symbols: List[Symbol] = [
            Symbol(k, 0, (b.parities[k] + 1) % 2, 1 - b.degrees2[k], b.labels[k]) for k in range(len(b))
        ]
        self._by_label = {s.label: s for s in self.symbols}
        self._gen_cache: Dict[Tuple[int, int], ChiPoly] = {}
        self._sym_cache: Dict[Tuple[Symbol, Symbol], ChiPoly] = {}
        self._proj_cache: Dict[Tuple[Symbol, Symbol], ChiPoly] = {}
        self._f_pair = [bilinear_form(spec.f, x) for x in b.elements]

    # -- symbols ------------------------------------------------------------

    def sym(self, label: str, m: int = 0) -> Symbol:
        return self._by_label[label].derive(m) if m else self._by_label[label]

    def var(self, label: str, m: int = 0) -> DiffPoly:
        return DiffPoly.sym(self.sym(label, m))

    def bar(self, x: SuperElement) -> DiffPoly:
        """The linear polynomial attached to a Lie algebra element."""
        coords = self.basis.coordinates(x)
        return DiffPoly({(self.symbols[k],): c for k, c in coords.items()})

    def in_n(self, s: Symbol) -> bool:
        return self.basis.degrees2[s.idx] > 0

    def lie_parity(self, s: Symbol) -> int:
        return self.basis.parities[s.idx]

    # -- brackets -----------------------------------------------------------

    def generator_bracket(self, i: int, j: int) -> ChiPoly:
        """[a_i chi a_j] for underived generators."""
        key = (i, j)
        hit = self._gen_cache.get(key)
        if hit is not None:
            return hit
        a, b = self.basis.elements[i], self.basis.elements[j]
        pa = self.basis.parities[i]
        pbbar = (self.basis.parities[j] + 1) % 2
        lin = self.bar(lie_bracket(a, b))
        if pa * pbbar:
            lin = -lin
        out = {0: lin}
        form = bilinear_form(a, b) * self.level
        if form:
            out[1] = DiffPoly.const(form)
        res = ChiPoly(out)
        self._gen_cache[key] = res
        return res

    def symbol_bracket(self, s: Symbol, t: Symbol) -> ChiPoly:
        key = (s, t)
        hit = self._sym_cache.get(key)
        if hit is not None:
            return hit
        res = self.generator_bracket(s.idx, t.idx)
        # derivatives on the right: (-1)^{p(s0)+1} (D + chi) each
        right_sign = -1 if s.base_parity % 2 == 0 else 1
        for _ in range(t.m):
            res = res.D_plus_chi()
            if right_sign < 0:
                res = -res
        # derivatives on the left: chi each
        if s.m:
            res = res.chi_left(s.m)
        self._sym_cache[key] = res
        return res

    def bracket_symbol_left(self, s: Symbol, q: DiffPoly, project: bool = False) -> ChiPoly:
        """{s chi q} by the Leibniz rule in the right argument.

        With ``project`` the result is pushed through the projection at every
        leaf, which gives the same answer as projecting at the end.
        """
        out = ChiPoly()
        ps1 = (s.parity + 1) % 2
        for mono, c in q.terms.items():
            if not mono:
                continue
            out = out + self._bracket_symbol_monomial(s, mono, ps1, project).scale(c)
        return out

    def _bracket_symbol_monomial(self, s: Symbol, mono: Monomial, ps1: int, project: bool) -> ChiPoly:
        out = ChiPoly()
        prefix_par = 0
        for k, t in enumerate(mono):
            br = self.projected_symbol_bracket(s, t) if project else self.symbol_bracket(s, t)
            if not br.is_zero():
                left = DiffPoly({mono[:k]: Fraction(1)})
                right = DiffPoly({mono[k + 1:]: Fraction(1)})
                if project:
                    left, right = self.project(left), self.project(right)
                term = br.right_mul(right).left_mul(left)
                if ps1 * prefix_par:
                    term = -term
                out = out + term
            prefix_par ^= t.parity
        return out

    def projected_symbol_bracket(self, s: Symbol, t: Symbol) -> ChiPoly:
        key = (s, t)
        hit = self._proj_cache.get(key)
        if hit is None:
            hit = self.symbol_bracket(s, t).map(self.project)
            self._proj_cache[key] = hit
        return hit

    def arrow(self, x: ChiPoly, b: DiffPoly) -> ChiPoly:
        """Sum of eps r_n (chi + D)^n b for x = sum chi^n r_n.

        eps = (-1)^(n p(r_n) + n(n-1)/2) comes from moving r_n to the left of
        chi^n and reordering the odd factors of (chi + D)^n.
        """
        out = ChiPoly()
        if not b:
            return out
        power = ChiPoly.scalar(b)
        top = x.max_power
        for n in range(top + 1):
            r = x.coeffs.get(n)
            if r:
                even, odd = _sign_split(r)
                tri = (n * (n - 1) // 2) % 2
                for part, pr in ((even, 0), (odd, 1)):
                    if part:
                        term = power.left_mul(part)
                        out = out - term if (n * pr + tri) % 2 else out + term
            if n < top:
                power = power.D_plus_chi()
        return out

    def bracket(self, p: DiffPoly, q: DiffPoly) -> ChiPoly:
        """{p chi q} for arbitrary differential polynomials."""
        out = ChiPoly()
        q_even, q_odd = _sign_split(q)
        for mono, c in p.terms.items():
            if not mono:
                continue
            for qq, pq in ((q_even, 0), (q_odd, 1)):
                if qq:
                    out = out + self._bracket_monomial(mono, qq, pq).scale(c)
        return out

    def _bracket_monomial(self, mono: Monomial, q: DiffPoly, pq: int) -> ChiPoly:
        if len(mono) == 1:
            return self.bracket_symbol_left(mono[0], q)
        a, rest = mono[0], mono[1:]
        pa = a.parity
        pb = monomial_parity(rest)
        b = DiffPoly({rest: Fraction(1)})
        av = DiffPoly.sym(a)
        first = self.arrow(self.bracket_symbol_left(a, q), b)
        if pq * pb:
            first = -first
        second = self.arrow(self._bracket_monomial(rest, q, pq), av)
        if pa * ((pb + pq) % 2):
            second = -second
        return first + second

    # -- projection ---------------------------------------------------------

    def project_symbol(self, s: Symbol) -> DiffPoly:
        if not self.in_n(s):
            return DiffPoly.sym(s)
        if s.m:
            return DiffPoly()
        return DiffPoly.const(self._f_pair[s.idx])

    def project(self, p: DiffPoly) -> DiffPoly:
        if not any(self.in_n(s) for m in p.terms for s in m):
            return p
        return p.substitute(self.project_symbol)

    def pi_tilde(self, x: ChiPoly) -> ChiPoly:
        return x.map(self.project)

    def membership_residual(self, n_sym: Symbol, w: DiffPoly) -> ChiPoly:
        """The projected bracket {n chi w}; zero exactly when w passes for this n."""
        return self.bracket_symbol_left(n_sym, w, project=True)

    def n_symbols(self) -> List[Symbol]:
        return [s for s in self.symbols if self.in_n(s)]


# -- axiom checks -------------------------------------------------------------


def _neg_chi_minus_D_expand(pva: AffinePVA, x: ChiPoly) -> ChiPoly:
    """sum (-chi - D)^n r_n for x = sum chi^n r_n."""
    out = ChiPoly()
    for n, r in x.coeffs.items():
        cur = ChiPoly.scalar(r)
        for _ in range(n):
            cur = -cur.D_plus_chi()
        out = out + cur
    return out


def skew_check(pva: AffinePVA, a: DiffPoly, b: DiffPoly) -> ChiPoly:
    """[a chi b] - (-1)^{p(a)p(b)} [b -chi-D a]; zero when skewsymmetry holds."""
    pa, pb = a.parity, b.parity
    if pa is None or pb is None:
        raise ValueError("skew_check needs homogeneous arguments")
    lhs = pva.bracket(a, b)
    rhs = _neg_chi_minus_D_expand(pva, pva.bracket(b, a))
    if pa * pb:
        rhs = -rhs
    return lhs - rhs


def skew_via_swap(pva: AffinePVA, a: DiffPoly, b: DiffPoly) -> ChiPoly:
    """[a chi b] computed from the opposite bracket; independent of the right Leibniz rule."""
    res = _neg_chi_minus_D_expand(pva, pva.bracket(b, a))
    return -res if a.parity * b.parity else res


def _bracket_into_gamma_first(pva: AffinePVA, a: DiffPoly, inner: ChiPoly) -> ChiGammaPoly:
    """[a chi (sum gamma^n r_n)] as chi^m gamma^n coefficients."""
    pa1 = (a.parity + 1) % 2
    out: Dict[Tuple[int, int], DiffPoly] = {}
    for n, r in inner.coeffs.items():
        res = pva.bracket(a, r)
        for m, s in res.coeffs.items():
            sign = (-1) ** ((n * pa1 + n * m) % 2)
            _acc(out, (m, n), s if sign > 0 else -s)
    return ChiGammaPoly(out)


def _bracket_gamma_into_chi(pva: AffinePVA, b: DiffPoly, inner: ChiPoly) -> ChiGammaPoly:
    """[b gamma (sum chi^n r_n)] as chi^n gamma^m coefficients."""
    pb1 = (b.parity + 1) % 2
    out: Dict[Tuple[int, int], DiffPoly] = {}
    for n, r in inner.coeffs.items():
        res = pva.bracket(b, r)
        for m, s in res.coeffs.items():
            sign = -1 if (n * pb1) % 2 else 1
            _acc(out, (n, m), s if sign > 0 else -s)
    return ChiGammaPoly(out)


def _bracket_shifted(pva: AffinePVA, outer: ChiPoly, c: DiffPoly) -> ChiGammaPoly:
    """[[a chi b] chi+gamma c] from outer = [a chi b]."""
    out: Dict[Tuple[int, int], DiffPoly] = {}
    for n, v in outer.coeffs.items():
        res = pva.bracket(v, c)
        for m, s in res.coeffs.items():
            for (x, y), cnt in _chi_plus_gamma_powers(m).items():
                coef = cnt * (-1 if n % 2 else 1)
                _acc(out, (n + x, y), s.scale(coef))
    return ChiGammaPoly(out)


def jacobi_check(pva: AffinePVA, a: DiffPoly, b: DiffPoly, c: DiffPoly) -> ChiGammaPoly:
    """Defect of the Jacobi identity; zero when it holds."""
    pa, pb = a.parity, b.parity
    if pa is None or pb is None or c.parity is None:
        raise ValueError("jacobi_check needs homogeneous arguments")
    lhs = _bracket_into_gamma_first(pva, a, pva.bracket(b, c))
    t1 = _bracket_shifted(pva, pva.bracket(a, b), c)
    if pa % 2 == 0:
        t1 = -t1
    t2 = _bracket_gamma_into_chi(pva, b, pva.bracket(a, c))
    if ((pa + 1) * (pb + 1)) % 2:
        t2 = -t2
    return lhs - t1 - t2

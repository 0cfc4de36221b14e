"""Matrix presentations of gl/sl(n+-1|n) and osp(M|2n) with an odd principal nilpotent.

Everything is exact: coefficients are ``Fraction`` and ad-x degrees are kept
doubled so that they stay integers.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from sympy import QQ
from sympy.polys.matrices import DomainMatrix

Index = Tuple[int, int]


class Family(enum.Enum):
    GL_PLUS = ("gl", "n+1")
    GL_MINUS = ("gl", "n-1")
    SL_PLUS = ("sl", "n+1")
    SL_MINUS = ("sl", "n-1")
    OSP_ODD_PLUS = ("osp", "2n+1|2n")
    OSP_ODD_MINUS = ("osp", "2n-1|2n")
    OSP_EVEN = ("osp", "2n|2n")
    OSP_EVEN_PLUS = ("osp", "2n+2|2n")

    @classmethod
    def lookup(cls, kind: str, variant: str) -> "Family":
        for fam in cls:
            if fam.value == (kind, variant):
                return fam
        raise ValueError(f"unknown algebra family {kind!r} with variant {variant!r}")

    @property
    def kind(self) -> str:
        return self.value[0]

    @property
    def variant(self) -> str:
        return self.value[1]

    @property
    def is_osp(self) -> bool:
        return self.kind == "osp"

    @property
    def is_sl(self) -> bool:
        return self.kind == "sl"

    @property
    def is_osp_odd(self) -> bool:
        return self in (Family.OSP_ODD_PLUS, Family.OSP_ODD_MINUS)

    @property
    def is_osp_even(self) -> bool:
        return self in (Family.OSP_EVEN, Family.OSP_EVEN_PLUS)


@dataclass(frozen=True)
class AlgebraSpec:
    """A family together with its rank ``n``.

    Fixes the index set ``1..size``, the parity map, the delta map used for the
    orthosymplectic forms and the position weights that define the grading.
    """

    family: Family
    n: int

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 1:
            raise ValueError("rank n must be a positive integer")
        if self.family in (Family.GL_MINUS, Family.SL_MINUS) and self.n < 2:
            raise ValueError("gl(n-1|n) and sl(n-1|n) need n >= 2")

    # -- index data -------------------------------------------------------

    @cached_property
    def size(self) -> int:
        n, fam = self.n, self.family
        if fam in (Family.GL_PLUS, Family.SL_PLUS):
            return 2 * n + 1
        if fam in (Family.GL_MINUS, Family.SL_MINUS):
            return 2 * n - 1
        return {
            Family.OSP_ODD_PLUS: 4 * n + 1,
            Family.OSP_ODD_MINUS: 4 * n - 1,
            Family.OSP_EVEN: 4 * n,
            Family.OSP_EVEN_PLUS: 4 * n + 2,
        }[fam]

    @property
    def indices(self) -> range:
        return range(1, self.size + 1)

    def _check(self, i: int) -> None:
        if not 1 <= i <= self.size:
            raise IndexError(f"index {i} outside 1..{self.size}")

    @cached_property
    def _parities(self) -> Tuple[int, ...]:
        n, fam = self.n, self.family
        out = []
        for i in range(1, self.size + 1):
            if fam in (Family.GL_PLUS, Family.SL_PLUS, Family.OSP_ODD_PLUS):
                odd = i % 2 == 0
            elif fam in (Family.GL_MINUS, Family.SL_MINUS, Family.OSP_ODD_MINUS):
                odd = i % 2 == 1
            elif fam is Family.OSP_EVEN:
                even = (i % 2 == 0 and i <= 2 * n) or (i % 2 == 1 and i >= 2 * n + 1)
                odd = not even
            else:
                even = (i % 2 == 1 and i <= 2 * n + 1) or (i % 2 == 0 and i >= 2 * n + 2)
                odd = not even
            out.append(int(odd))
        return tuple(out)

    def parity(self, i: int) -> int:
        self._check(i)
        return self._parities[i - 1]

    @cached_property
    def _deltas(self) -> Tuple[int, ...]:
        n, fam = self.n, self.family
        out = []
        for k in range(1, self.size + 1):
            if fam is Family.OSP_ODD_PLUS:
                d = k % 2 == 0 and 2 * n + 2 <= k <= 4 * n
            elif fam is Family.OSP_ODD_MINUS:
                d = k % 2 == 1 and 2 * n + 1 <= k <= 4 * n - 1
            elif fam is Family.OSP_EVEN:
                d = k % 2 == 1 and k <= 2 * n - 1
            else:
                d = k % 2 == 0 and 2 <= k <= 2 * n
            out.append(int(d))
        return tuple(out)

    def delta(self, k: int) -> int:
        if not self.family.is_osp:
            raise ValueError("the delta map only exists for orthosymplectic families")
        self._check(k)
        return self._deltas[k - 1]

    def conj(self, i: int) -> int:
        """The mirrored index ``|I| + 1 - i``."""
        self._check(i)
        return self.size + 1 - i

    def position(self, i: int) -> int:
        """Position weight of index ``i`` along the chain of ``f``.

        The degree of ``e_ij`` is half the difference ``position(j) - position(i)``.
        For the even orthosymplectic families the two middle indices share a weight.
        """
        self._check(i)
        if self.family is Family.OSP_EVEN and i >= 2 * self.n + 1:
            return i - 1
        if self.family is Family.OSP_EVEN_PLUS:
            return i + 1 if i <= 2 * self.n + 1 else i
        return i

    def tau(self, i: int, j: int) -> int:
        p = self.parity
        return (-1) ** ((p(i) * p(j) + p(j) + 1 + self.delta(i) + self.delta(j)) % 2)

    def T(self, i: int, k: int) -> int:
        """Sum of delta over the indices ``k+1..i`` (zero unless ``i > k``)."""
        if i <= k:
            return 0
        return sum(self.delta(j) for j in range(k + 1, i + 1))

    @property
    def name(self) -> str:
        n, fam = self.n, self.family
        if fam.kind in ("gl", "sl"):
            m = n + 1 if fam.variant == "n+1" else n - 1
            return f"{fam.kind}({m}|{n})"
        m = {
            Family.OSP_ODD_PLUS: 2 * n + 1,
            Family.OSP_ODD_MINUS: 2 * n - 1,
            Family.OSP_EVEN: 2 * n,
            Family.OSP_EVEN_PLUS: 2 * n + 2,
        }[fam]
        return f"osp({m}|{2 * n})"

    # -- elements ---------------------------------------------------------

    def unit(self, i: int, j: int) -> "SuperElement":
        self._check(i)
        self._check(j)
        return SuperElement(self, {(i, j): Fraction(1)})

    def zero(self) -> "SuperElement":
        return SuperElement(self, {})

    def identity(self) -> "SuperElement":
        return SuperElement(self, {(i, i): Fraction(1) for i in self.indices})

    def theta(self, x: "SuperElement") -> "SuperElement":
        out: Dict[Index, Fraction] = {}
        for (i, j), c in x.coeffs.items():
            key = (self.conj(j), self.conj(i))
            out[key] = out.get(key, 0) + self.tau(i, j) * c
        return SuperElement(self, out)

    def fold_F(self, i: int, j: int) -> "SuperElement":
        if not self.family.is_osp:
            raise ValueError("folded elements only exist for orthosymplectic families")
        e = self.unit(i, j)
        return e + self.theta(e)

    def fold_E(self, i: int, j: int) -> "SuperElement":
        return self.fold_F(i, j) * Fraction((-1) ** self.parity(i), 2)

    def bilinear_J(self) -> "SuperElement":
        return SuperElement(
            self, {(k, self.conj(k)): Fraction((-1) ** self.delta(k)) for k in self.indices}
        )

    def in_osp(self, a: "SuperElement") -> bool:
        J = self.bilinear_J()
        return (a.supertranspose() @ J + J @ a).is_zero()

    @cached_property
    def osp_index_set(self) -> List[Index]:
        N = self.size
        return [
            (i, j)
            for i in self.indices
            for j in self.indices
            if i + j <= N + 1 and not (j == self.conj(i) and self.parity(i) == 0)
        ]

    def principal_f(self) -> "SuperElement":
        N, fam = self.size, self.family
        if not fam.is_osp:
            out = self.zero()
            for i in range(1, N):
                out = out + self.unit(i + 1, i)
            return out
        out = self.zero()
        if fam.is_osp_odd:
            for i in range(1, (N - 1) // 2 + 1):
                out = out + self.fold_F(i + 1, i)
            return out
        h = N // 2
        out = self.fold_F(h + 1, h - 1)
        for i in range(1, h):
            out = out + self.fold_F(i + 1, i)
        return out

    @cached_property
    def f(self) -> "SuperElement":
        return self.principal_f()

    @cached_property
    def basis(self) -> "LieBasis":
        return LieBasis.build(self)


class SuperElement:
    """Finite rational combination of matrix units ``e_ij``."""

    __slots__ = ("spec", "coeffs")

    def __init__(self, spec: AlgebraSpec, coeffs: Dict[Index, Fraction]):
        self.spec = spec
        self.coeffs = {k: Fraction(v) for k, v in coeffs.items() if v != 0}

    def __add__(self, other: "SuperElement") -> "SuperElement":
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, 0) + v
        return SuperElement(self.spec, out)

    def __neg__(self) -> "SuperElement":
        return SuperElement(self.spec, {k: -v for k, v in self.coeffs.items()})

    def __sub__(self, other: "SuperElement") -> "SuperElement":
        return self + (-other)

    def __mul__(self, scalar) -> "SuperElement":
        return SuperElement(self.spec, {k: v * scalar for k, v in self.coeffs.items()})

    __rmul__ = __mul__

    def __matmul__(self, other: "SuperElement") -> "SuperElement":
        """Ordinary matrix product."""
        out: Dict[Index, Fraction] = {}
        for (i, j), a in self.coeffs.items():
            for (k, l), b in other.coeffs.items():
                if j == k:
                    out[(i, l)] = out.get((i, l), 0) + a * b
        return SuperElement(self.spec, out)

    def __eq__(self, other) -> bool:
        return isinstance(other, SuperElement) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def __getitem__(self, key: Index) -> Fraction:
        return self.coeffs.get(key, Fraction(0))

    def __repr__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = [f"{c}*e[{i},{j}]" for (i, j), c in sorted(self.coeffs.items())]
        return " + ".join(parts)

    def is_zero(self) -> bool:
        return not self.coeffs

    def _unit_parity(self, key: Index) -> int:
        p = self.spec.parity
        return (p(key[0]) + p(key[1])) % 2

    @property
    def parity(self) -> Optional[int]:
        """0 or 1, or ``None`` when the element mixes parities (zero counts as even)."""
        ps = {self._unit_parity(k) for k in self.coeffs}
        if len(ps) > 1:
            return None
        return ps.pop() if ps else 0

    @property
    def degree2(self) -> Optional[int]:
        """Twice the ad-x degree, or ``None`` if inhomogeneous."""
        pos = self.spec.position
        ds = {pos(j) - pos(i) for (i, j) in self.coeffs}
        if len(ds) > 1:
            return None
        return ds.pop() if ds else 0

    def supertrace(self) -> Fraction:
        p = self.spec.parity
        return sum(((-1) ** p(i) * c for (i, j), c in self.coeffs.items() if i == j), Fraction(0))

    def supertranspose(self) -> "SuperElement":
        p = self.spec.parity
        out = {(j, i): (-1) ** ((p(i) + 1) * p(j) % 2) * c for (i, j), c in self.coeffs.items()}
        return SuperElement(self.spec, out)


def lie_bracket(a: SuperElement, b: SuperElement) -> SuperElement:
    p = a.spec.parity
    out: Dict[Index, Fraction] = {}
    for (i, j), x in a.coeffs.items():
        pa = (p(i) + p(j)) % 2
        for (k, l), y in b.coeffs.items():
            if j == k:
                out[(i, l)] = out.get((i, l), 0) + x * y
            if i == l:
                sign = -1 if pa * ((p(k) + p(l)) % 2) == 0 else 1
                out[(k, j)] = out.get((k, j), 0) + sign * x * y
    return SuperElement(a.spec, out)


def bilinear_form(a: SuperElement, b: SuperElement) -> Fraction:
    return (a @ b).supertrace()


def grading_degree(x: SuperElement) -> Fraction:
    d = x.degree2
    if d is None:
        raise ValueError("element is not homogeneous for the grading")
    return Fraction(d, 2)


def subalgebra_of(x: SuperElement) -> str:
    """'n' for positive degree, 'g0' for degree zero, 'n-' for negative."""
    d = x.degree2
    if d is None:
        raise ValueError("element is not homogeneous for the grading")
    return "n" if d > 0 else ("g0" if d == 0 else "n-")


def _to_dm(rows: Sequence[Sequence[Fraction]], nrows: int, ncols: int) -> DomainMatrix:
    return DomainMatrix([[QQ(int(v.numerator), int(v.denominator)) for v in r] for r in rows],
                        (nrows, ncols), QQ)


def _frac(q) -> Fraction:
    return Fraction(int(q.numerator), int(q.denominator))


def nullspace(rows: Sequence[Sequence[Fraction]], ncols: int) -> List[List[Fraction]]:
    """Exact basis of ``{x : rows @ x = 0}``."""
    if not rows:
        return [[Fraction(int(i == j)) for j in range(ncols)] for i in range(ncols)]
    M = _to_dm(rows, len(rows), ncols)
    ns = M.nullspace().to_Matrix()
    return [[Fraction(int(v.p), int(v.q)) for v in ns.row(r)] for r in range(ns.rows)]


def rank(vectors: Sequence[Sequence[Fraction]], ncols: int) -> int:
    if not vectors:
        return 0
    return _to_dm(vectors, len(vectors), ncols).rank()


class LieBasis:
    """A homogeneous basis of the algebra plus exact coordinate extraction."""

    def __init__(self, spec: AlgebraSpec, labels: List[str], elements: List[SuperElement]):
        self.spec = spec
        self.labels = labels
        self.elements = elements
        self.parities = []
        self.degrees2 = []
        for x in elements:
            if x.parity is None or x.degree2 is None:
                raise ValueError(f"basis element {x!r} is not homogeneous")
            self.parities.append(x.parity)
            self.degrees2.append(x.degree2)
        self.index = {lab: k for k, lab in enumerate(labels)}
        self._units = sorted({u for x in elements for u in x.coeffs})
        unit_pos = {u: r for r, u in enumerate(self._units)}
        cols = [[Fraction(0)] * len(elements) for _ in self._units]
        for k, x in enumerate(elements):
            for u, c in x.coeffs.items():
                cols[unit_pos[u]][k] = c
        # pick rows (matrix units) on which the basis restricts to an invertible square
        B = _to_dm(cols, len(self._units), len(elements))
        _, pivots = B.transpose().rref()
        if len(pivots) != len(elements):
            raise ValueError("basis elements are linearly dependent")
        self._pivot_units = [self._units[r] for r in pivots]
        square = _to_dm([cols[r] for r in pivots], len(pivots), len(elements))
        inv = square.inv().to_Matrix()
        self._inverse = [
            [Fraction(int(inv[r, c].p), int(inv[r, c].q)) for c in range(inv.cols)]
            for r in range(inv.rows)
        ]

    def __len__(self) -> int:
        return len(self.elements)

    @classmethod
    def build(cls, spec: AlgebraSpec) -> "LieBasis":
        fam = spec.family
        labels: List[str] = []
        elems: List[SuperElement] = []
        if fam.is_osp:
            for i, j in spec.osp_index_set:
                labels.append(f"E[{i},{j}]")
                elems.append(spec.fold_E(i, j))
        elif fam.is_sl:
            N = spec.size
            ident = spec.identity()
            s_id = ident.supertrace()  # +1 or -1
            for i in spec.indices:
                for j in spec.indices:
                    if i != j:
                        labels.append(f"e[{i},{j}]")
                        elems.append(spec.unit(i, j))
                    elif i < N:
                        labels.append(f"h[{i}]")
                        # e_ii - (str e_ii / str I) I is supertraceless
                        elems.append(spec.unit(i, i) - ident * ((-1) ** spec.parity(i) / s_id))
        else:
            for i in spec.indices:
                for j in spec.indices:
                    labels.append(f"e[{i},{j}]")
                    elems.append(spec.unit(i, j))
        return cls(spec, labels, elems)

    def coordinates(self, x: SuperElement) -> Dict[int, Fraction]:
        vec = [x[u] for u in self._pivot_units]
        out: Dict[int, Fraction] = {}
        for k, row in enumerate(self._inverse):
            c = sum((a * b for a, b in zip(row, vec) if a and b), Fraction(0))
            if c:
                out[k] = c
        back = self.spec.zero()
        for k, c in out.items():
            back = back + self.elements[k] * c
        if back != x:
            raise ValueError(f"{x!r} is not in the span of the basis")
        return out

    def element(self, label: str) -> SuperElement:
        return self.elements[self.index[label]]

    def where(self, sign: str) -> List[int]:
        """Basis positions lying in 'n' (degree > 0), 'p' (degree <= 0) or 'g0'."""
        if sign == "n":
            return [k for k, d in enumerate(self.degrees2) if d > 0]
        if sign == "p":
            return [k for k, d in enumerate(self.degrees2) if d <= 0]
        if sign == "g0":
            return [k for k, d in enumerate(self.degrees2) if d == 0]
        raise ValueError(sign)


def graded_dimensions(spec: AlgebraSpec) -> Dict[Fraction, int]:
    out: Dict[Fraction, int] = {}
    for d in spec.basis.degrees2:
        key = Fraction(d, 2)
        out[key] = out.get(key, 0) + 1
    return dict(sorted(out.items()))


def kernel_of_ad_f(spec: AlgebraSpec, degree2: Optional[int] = None) -> List[SuperElement]:
    """Basis of the centralizer of ``f``, optionally restricted to one degree."""
    basis = spec.basis
    f = spec.f
    out: List[SuperElement] = []
    degrees = sorted(set(basis.degrees2)) if degree2 is None else [degree2]
    for d in degrees:
        idx = [k for k, dd in enumerate(basis.degrees2) if dd == d]
        images = [lie_bracket(f, basis.elements[k]) for k in idx]
        units = sorted({u for y in images for u in y.coeffs})
        rows = [[y[u] for y in images] for u in units]
        for vec in nullspace(rows, len(idx)):
            v = spec.zero()
            for k, c in zip(idx, vec):
                if c:
                    v = v + basis.elements[k] * c
            out.append(v)
    return out


def _v_osp_odd(spec: AlgebraSpec, k: int) -> SuperElement:
    N = spec.size
    out = spec.zero()
    for i in range(1, N + 2 - k):
        s = (k * i + sum(spec.delta(i + l) for l in range(k - 1))) % 2
        out = out + spec.fold_E(k - 1 + i, i) * (-1) ** s
    return out


def _v_osp_even_high(spec: AlgebraSpec, l: int) -> SuperElement:
    n, T, c = spec.n, spec.T, spec.conj
    out = spec.zero()
    for k in range(1, 4 * n - l + 1):
        s = (T(2 * n, k) + k * l + k + l + 1) % 2
        out = out + spec.fold_E(c(k), 4 * n + 1 - l - k) * (2 * (-1) ** s)
    return out


def _v_osp_even_low(spec: AlgebraSpec, l: int) -> SuperElement:
    # t = 2n - l and column 4n+1-l-k are the values that make every term
    # homogeneous of degree (1-l)/2
    n, T, c, E = spec.n, spec.T, spec.conj, spec.fold_E
    t = 2 * n - l
    out = (E(2 * n, t + 1) - E(2 * n + 1, t + 1)) * (-1) ** t
    out = out + (E(c(t + 1), c(2 * n)) - E(c(t + 1), 2 * n)) * (-1) ** ((T(2 * n, t + 1) + 1) % 2)
    for k in range(1, t + 1):
        out = out + E(2 * n - 1 - t + k, k) * (-1) ** ((t * (k + 1)) % 2)
        s = (t * k + 1 + T(2 * n - 1 - t + k, k)) % 2
        out = out + E(c(k), c(2 * n - 1 - t + k)) * (-1) ** s
    for k in range(t + 1, 2 * n + 1):
        s = (T(2 * n, k) + k * l + k + l) % 2
        out = out + E(c(k), 4 * n + 1 - l - k) * (2 * (-1) ** s)
    return out


def explicit_kerf(spec: AlgebraSpec) -> Dict[str, SuperElement]:
    """The closed-form centralizer elements available for the orthosymplectic families.

    Keys are ``v{t}`` (and ``vt{2n}`` for the extra element of osp(2n|2n)).  Only
    indices ``t`` congruent to 0 or 3 mod 4 are included.
    """
    fam, n, N = spec.family, spec.n, spec.size
    out: Dict[str, SuperElement] = {}
    if fam.is_osp_odd:
        for t in range(1, N + 1):
            if t % 4 in (0, 3):
                out[f"v{t}"] = _v_osp_odd(spec, t)
    elif fam is Family.OSP_EVEN:
        for l in range(2, 4 * n):
            if l % 4 not in (0, 3):
                continue
            out[f"v{l}"] = _v_osp_even_high(spec, l) if l >= 2 * n + 1 else _v_osp_even_low(spec, l)
        out[f"vt{2 * n}"] = spec.fold_E(2 * n, 1) - spec.fold_E(2 * n + 1, 1)
    return out


def kerf_basis(spec: AlgebraSpec) -> Dict[str, SuperElement]:
    """A homogeneous basis of the centralizer of ``f``, keyed ``v{t}`` with ``v_t`` of degree (1-t)/2.

    Closed forms are used where they exist and check out; otherwise (and for
    gl/sl and osp(2n+2|2n)) the kernel is solved degree by degree.  When a degree
    carries a two-dimensional kernel the second vector gets the ``vt`` prefix.
    """
    explicit = explicit_kerf(spec)
    if explicit and all(lie_bracket(spec.f, v).is_zero() and not v.is_zero()
                        for v in explicit.values()):
        if len(explicit) == len(kernel_of_ad_f(spec)):
            return explicit
    out: Dict[str, SuperElement] = {}
    for v in kernel_of_ad_f(spec):
        t = 1 - v.degree2
        key = f"v{t}" if f"v{t}" not in out else f"vt{t}"
        if spec.family is Family.OSP_EVEN_PLUS and t == 2 * spec.n + 1 and t % 4 not in (0, 3):
            key = f"vt{t}"
        out[key] = v
    return out

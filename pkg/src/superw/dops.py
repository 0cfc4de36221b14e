"""Pseudodifferential operators over the differential algebra, with an odd chi.

An operator is stored in normal form ``sum chi^k a_{k,i} D^i``: chi powers on the
left, coefficients in the middle, powers of D (possibly negative) on the
right.  Operators that involve D^-1 are infinite series; they are kept down to
an exactness floor, below which nothing is known.
"""

from __future__ import annotations

import os
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .superpoly import DiffPoly, apply_D, multiply, split_parity

Key = Tuple[int, int]  # (chi power, D degree)

FLOOR_ENV = "SUPERW_FLOOR"


class FloorExhausted(ArithmeticError):
    """A coefficient below the exactness floor was requested."""


def default_floor(size: Optional[int] = None) -> int:
    """Truncation depth: $SUPERW_FLOOR if set, else -(size + 4)."""
    env = os.environ.get(FLOOR_ENV)
    if env:
        return int(env)
    return -((size or 8) + 4)


def gbinom(k: int, r: int) -> int:
    """Binomial coefficient with arbitrary integer top."""
    if r < 0:
        return 0
    num = 1
    for j in range(r):
        num *= k - j
    den = 1
    for j in range(2, r + 1):
        den *= j
    return num // den


def _max_floor(*vals: Optional[int]) -> Optional[int]:
    present = [v for v in vals if v is not None]
    return max(present) if present else None


class DOp:
    """``sum chi^k a D^i`` with exactness floor ``floor`` (None: exact).

    With no chi terms this is an element of V((D^-1)); chi terms appear after
    the adjoint action or after substituting D -> D + chi.
    """

    __slots__ = ("terms", "floor")

    def __init__(self, terms: Optional[Dict[Key, DiffPoly]] = None, floor: Optional[int] = None):
        self.floor = floor
        self.terms: Dict[Key, DiffPoly] = {}
        for key, c in (terms or {}).items():
            if c and (floor is None or key[1] >= floor):
                self.terms[key] = c

    # -- constructors -----------------------------------------------------

    @classmethod
    def const(cls, c) -> "DOp":
        if isinstance(c, DiffPoly):
            return cls({(0, 0): c})
        return cls({(0, 0): DiffPoly.const(c)})

    @classmethod
    def D(cls, power: int = 1) -> "DOp":
        return cls({(0, power): DiffPoly.const(1)})

    @classmethod
    def chi(cls, power: int = 1) -> "DOp":
        return cls({(power, 0): DiffPoly.const(1)})

    @classmethod
    def from_coeffs(cls, coeffs: Dict[int, DiffPoly], floor: Optional[int] = None) -> "DOp":
        return cls({(0, i): c for i, c in coeffs.items()}, floor)

    # -- basic structure --------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    @property
    def maxdeg(self) -> Optional[int]:
        return max((i for _, i in self.terms), default=None)

    @property
    def mindeg(self) -> Optional[int]:
        return min((i for _, i in self.terms), default=None)

    @property
    def has_chi(self) -> bool:
        return any(k for k, _ in self.terms)

    @property
    def is_differential(self) -> bool:
        """Exact, chi-free and without negative powers of D."""
        return self.floor is None and not self.has_chi and all(i >= 0 for _, i in self.terms)

    def coeff(self, i: int, k: int = 0) -> DiffPoly:
        if self.floor is not None and i < self.floor:
            raise FloorExhausted(f"coefficient of D^{i} lies below floor {self.floor}")
        return self.terms.get((k, i), DiffPoly())

    def coeffs(self) -> Dict[int, DiffPoly]:
        """chi-free part as a map degree -> coefficient."""
        return {i: c for (k, i), c in self.terms.items() if k == 0}

    def truncate(self, floor: Optional[int]) -> "DOp":
        return DOp(self.terms, _max_floor(self.floor, floor))

    # -- linear structure -------------------------------------------------

    def __add__(self, other: "DOp") -> "DOp":
        floor = _max_floor(self.floor, other.floor)
        out = dict(self.terms)
        for key, c in other.terms.items():
            out[key] = out[key] + c if key in out else c
        return DOp(out, floor)

    def __neg__(self) -> "DOp":
        return DOp({k: -c for k, c in self.terms.items()}, self.floor)

    def __sub__(self, other: "DOp") -> "DOp":
        return self + (-other)

    def scale(self, c) -> "DOp":
        return DOp({k: v.scale(c) for k, v in self.terms.items()}, self.floor)

    def map(self, fn: Callable[[DiffPoly], DiffPoly]) -> "DOp":
        return DOp({k: fn(v) for k, v in self.terms.items()}, self.floor)

    def __eq__(self, other) -> bool:
        if not isinstance(other, DOp):
            return NotImplemented
        return (self - other).is_zero()

    __hash__ = None  # type: ignore[assignment]

    def __matmul__(self, other: "DOp") -> "DOp":
        return compose(self, other)

    def render(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for k, i in sorted(self.terms, key=lambda t: (-t[1], t[0])):
            head = "" if k == 0 else ("chi" if k == 1 else f"chi^{k}") + " "
            tail = "" if i == 0 else (" D" if i == 1 else f" D^{i}")
            parts.append(f"{head}[{self.terms[(k, i)].render()}]{tail}")
        out = " + ".join(parts)
        if self.floor is not None:
            out += f" + O(D^{self.floor - 1})"
        return out

    __repr__ = render


# -- composition ------------------------------------------------------------


def _D_past_chi(i: int, l: int) -> List[Tuple[int, int, int]]:
    """D^i chi^l = sum sign * chi^(l+e) D^(i-e); returned as (e, sign, i-e)."""
    if l % 2 == 0:
        return [(0, 1, i)]
    # D^i chi = (-1)^i chi D^i - 2 [i odd] chi^2 D^(i-1); chi^2 commutes with D
    out = [(0, (-1) ** (i % 2), i)]
    if i % 2:
        out.append((1, -2, i - 1))
    return out


def _D_past_coeff(i: int, parity: int, lowest: int) -> List[Tuple[int, int]]:
    """D^i b = sum_m C b^(m) D^(i-m) for b of the given parity; (m, C) for i-m >= lowest."""
    out = []
    half = i // 2
    m = 0
    while i - m >= lowest:
        r = m // 2
        if i % 2 == 0:
            c = gbinom(half, r) if m % 2 == 0 else 0
        elif m % 2:
            c = gbinom(half, r)
        else:
            c = gbinom(half, r) * (-1) ** parity
        if c:
            out.append((m, c))
        if i >= 0 and m >= i:
            break
        m += 1
    return out


class _Derivs:
    """Cached D-derivatives of a homogeneous coefficient."""

    def __init__(self, p: DiffPoly):
        self.seq = [p]

    def __getitem__(self, m: int) -> DiffPoly:
        while len(self.seq) <= m:
            self.seq.append(apply_D(self.seq[-1]))
        return self.seq[m]


def compose(A: DOp, B: DOp, floor: Optional[int] = None) -> DOp:
    """A o B in normal form.

    Terms below ``floor`` are dropped; the result floor also accounts for the
    unknown tails of the inputs.  When neither input is truncated and no
    infinite expansion was cut, the result is exact.
    """
    bound = _max_floor(
        None if A.floor is None else A.floor + (B.maxdeg or 0),
        None if B.floor is None else B.floor + (A.maxdeg or 0),
    )
    if not A.terms or not B.terms:
        return DOp({}, _max_floor(bound, floor) if bound is not None else None)
    needs_series = any(i < 0 for _, i in A.terms)
    target = floor
    if target is None and needs_series:
        target = default_floor()
    cut = _max_floor(bound, target)
    lowest = cut if cut is not None else -(10**9)

    left = []
    for (k, i), a in A.terms.items():
        ea, oa = split_parity(a)
        left.append((k, i, ea, oa))
    right = []
    for (l, j), b in B.terms.items():
        eb, ob = split_parity(b)
        right.append((l, j, _Derivs(eb) if eb else None, _Derivs(ob) if ob else None))

    out: Dict[Key, DiffPoly] = {}
    truncated = False
    for k, i, ea, oa in left:
        for l, j, db_even, db_odd in right:
            if i + j < lowest:
                truncated = True
                continue
            for e, s1, ip in _D_past_chi(i, l):
                chi = k + l + e
                for pa, a in ((0, ea), (1, oa)):
                    if not a:
                        continue
                    s2 = s1 * (-1) ** ((l + e) * pa)
                    for pb, db in ((0, db_even), (1, db_odd)):
                        if db is None:
                            continue
                        terms = _D_past_coeff(ip, pb, lowest - j)
                        if ip < 0:
                            truncated = True
                        for m, c in terms:
                            prod = multiply(a, db[m])
                            if not prod:
                                continue
                            key = (chi, ip - m + j)
                            val = prod.scale(s2 * c)
                            out[key] = out[key] + val if key in out else val
    exact = A.floor is None and B.floor is None and not truncated
    return DOp(out, None if exact else lowest)


def compose_all(ops: Sequence[DOp], floor: Optional[int] = None) -> DOp:
    """Left-to-right product; inner products are kept deep enough for ``floor``."""
    out = DOp.const(1)
    for idx in range(len(ops) - 1, -1, -1):
        depth = None
        if floor is not None:
            depth = floor - sum(max(o.maxdeg or 0, 0) for o in ops[:idx])
        out = compose(ops[idx], out, depth)
    return out


# -- chi-related operators ---------------------------------------------------


def chi_plus_D_inverse(floor: int) -> DOp:
    """(chi + D)^-1 = sum_n chi^n D^(-n-1), kept for D-degrees >= floor."""
    return DOp({(n, -n - 1): DiffPoly.const(1) for n in range(0, -floor)}, floor)


def chi_plus_D_power(i: int, floor: Optional[int] = None) -> DOp:
    """(D + chi)^i; negative powers use the inverse series."""
    if i >= 0:
        base = DOp({(0, 1): DiffPoly.const(1), (1, 0): DiffPoly.const(1)})
        out = DOp.const(1)
        for _ in range(i):
            out = compose(out, base)
        return out
    if floor is None:
        raise FloorExhausted("negative powers of D + chi need a truncation floor")
    inv = chi_plus_D_inverse(floor)
    out = DOp.const(1)
    for _ in range(-i):
        out = compose(out, inv, floor)
    return out


def substitute_chi(A: DOp, floor: Optional[int] = None) -> DOp:
    """A(D + chi): every a D^i becomes a (D + chi)^i, then chi is moved left."""
    if A.has_chi:
        raise ValueError("substitute_chi expects a chi-free operator")
    if floor is None and (A.floor is not None or any(i < 0 for _, i in A.terms)):
        raise FloorExhausted("operator has negative powers; pass a floor")
    floor = _max_floor(floor, A.floor)
    out = DOp({}, floor) if floor is not None else DOp()
    for (_, i), a in A.terms.items():
        depth = None if floor is None else floor
        out = out + compose(DOp.const(a), chi_plus_D_power(i, depth), floor)
    return out


def ad_chi(pva, P: DiffPoly, A: DOp, project: bool = False) -> DOp:
    """Coefficientwise bracket sum {P chi a_i} D^i (projected by pi-tilde if asked)."""
    if A.has_chi:
        raise ValueError("ad_chi acts on chi-free operators")
    out: Dict[Key, DiffPoly] = {}
    for (_, i), a in A.terms.items():
        br = pva.bracket(P, a)
        if project:
            br = pva.pi_tilde(br)
        for k, r in br.coeffs.items():
            if r:
                out[(k, i)] = r
    return DOp(out, A.floor)


# -- adjoint and right normal form --------------------------------------------


def _require_differential(A: DOp, what: str) -> None:
    if not A.is_differential:
        raise ValueError(f"{what} needs an exact chi-free operator without D^-1")


def adjoint_star(A: DOp) -> DOp:
    """(a D^m)* = (-1)^(m p(a) + floor((m+1)/2)) D^m a, normal-ordered."""
    _require_differential(A, "adjoint_star")
    out = DOp()
    for (_, m), a in A.terms.items():
        for pa, part in zip((0, 1), split_parity(a)):
            if not part:
                continue
            sign = (-1) ** ((m * pa + (m + 1) // 2) % 2)
            out = out + compose(DOp.D(m), DOp.const(part)).scale(sign)
    return out


def to_right_form(A: DOp) -> Dict[int, DiffPoly]:
    """Coefficients b_i with A = sum D^i b_i."""
    _require_differential(A, "to_right_form")
    rest = A
    out: Dict[int, DiffPoly] = {}
    while rest.terms:
        m = rest.maxdeg
        a = rest.terms[(0, m)]
        even, odd = split_parity(a)
        # D^m b = (-1)^(m p(b)) b D^m + lower
        b = even + (odd.scale(-1) if m % 2 else odd)
        out[m] = b
        rest = rest - compose(DOp.D(m), DOp.const(b))
    return out


def from_right_form(coeffs: Dict[int, DiffPoly]) -> DOp:
    out = DOp()
    for i, b in coeffs.items():
        out = out + compose(DOp.D(i), DOp.const(b))
    return out


# -- row determinants ---------------------------------------------------------

Matrix = Sequence[Sequence[DOp]]


def _scalar(op: DOp) -> Optional[Fraction]:
    """The rational value of a constant operator, None otherwise."""
    if not op.terms:
        return Fraction(0)
    if set(op.terms) != {(0, 0)}:
        return None
    p = op.terms[(0, 0)]
    if set(p.terms) != {()}:
        return None
    return p.terms[()]


def _check_hessenberg(M: Matrix) -> List[Fraction]:
    n = len(M)
    subs = []
    for i in range(n):
        for j in range(i - 1):
            if M[i][j].terms:
                raise ValueError(f"entry ({i + 1},{j + 1}) below the subdiagonal is nonzero")
        if i:
            s = _scalar(M[i][i - 1])
            if s is None:
                raise ValueError(f"subdiagonal entry ({i + 1},{i}) is not a constant")
            subs.append(s)
    return subs


def _path_sum(M: Matrix, weight: Callable[[int], int], floor: Optional[int]) -> DOp:
    """sum over 0 = i_0 < ... < i_r = N of prod_J weight(j) * M[i_0+1, i_1] M[i_1+1, i_2] ..."""
    n = len(M)
    memo: Dict[int, DOp] = {n: DOp.const(1)}
    for i in range(n - 1, -1, -1):
        acc = DOp()
        for j in range(i + 1, n + 1):
            entry = M[i][j - 1]
            if not entry.terms:
                continue
            term = compose(entry, memo[j], floor)
            acc = acc + (term if weight(j) == 1 else -term)
        memo[i] = acc
    return memo[0]


def rdet_path(M: Matrix, floor: Optional[int] = None) -> DOp:
    """Ordered path sum for any Hessenberg matrix with constant +-1 subdiagonal.

    A path skips the subdiagonal entries s_j for j outside J, each contributing
    -s_j, so the weight is prod_{j<N} (-s_j) * prod_{j in J, j<N} (-s_j).
    """
    subs = _check_hessenberg(M)
    if any(abs(s) != 1 for s in subs):
        raise ValueError("rdet_path expects a +-1 subdiagonal")
    n = len(M)
    out = _path_sum(M, lambda j: 1 if j == n else int(-subs[j - 1]), floor)
    glob = 1
    for s in subs:
        glob *= int(-s)
    return out if glob == 1 else -out


def rdet_gl(M: Matrix, floor: Optional[int] = None) -> DOp:
    """Ordered path sum for a matrix with -1 on the subdiagonal and zeros below it."""
    subs = _check_hessenberg(M)
    if any(s != -1 for s in subs):
        raise ValueError("rdet_gl expects -1 on the subdiagonal")
    return _path_sum(M, lambda j: 1, floor)


def rdet_osp_odd(M: Matrix, deltas: Sequence[int], n: int, floor: Optional[int] = None) -> DOp:
    """Signed path sum with weight (-1)^(n + sum_{j in J} delta_j); deltas[j-1] = delta_j."""
    _check_hessenberg(M)
    out = _path_sum(M, lambda j: (-1) ** deltas[j - 1], floor)
    return -out if n % 2 else out


def hessenberg_rdet(M: Matrix, floor: Optional[int] = None) -> DOp:
    """R_k = sum_i prod_{j=i}^{k-1} (-s_j) R_{i-1} M_{ik}, s_j the (j+1, j) entry.

    Expands along the last column, so it associates products differently from
    the path sums.
    """
    subs = _check_hessenberg(M)
    R = [DOp.const(1)]
    for k in range(1, len(M) + 1):
        acc = DOp()
        weight = Fraction(1)
        for i in range(k, 0, -1):
            if i < k:
                weight *= -subs[i - 1]
            if not weight:
                break
            entry = M[i - 1][k - 1]
            if entry.terms:
                acc = acc + compose(R[i - 1], entry, floor).scale(weight)
        R.append(acc)
    return R[-1]


def laplace_rdet(M: Matrix, floor: Optional[int] = None) -> DOp:
    """Row-ordered determinant sum_sigma sgn(sigma) M[1,s1] M[2,s2] ... M[N,sN].

    Columns are chosen row by row; memoized over the set of used columns.
    """
    n = len(M)
    rowmax = [max([max(e.maxdeg or 0, 0) for e in row if e.terms] or [0]) for row in M]
    prefix = [0] * (n + 1)
    for r in range(n):
        prefix[r + 1] = prefix[r] + rowmax[r]
    memo: Dict[int, DOp] = {}
    full = (1 << n) - 1

    def rest(used: int) -> DOp:
        if used == full:
            return DOp.const(1)
        if used in memo:
            return memo[used]
        r = bin(used).count("1")
        depth = None if floor is None else floor - prefix[r]
        acc = DOp()
        free_before = 0
        for c in range(n):
            if used >> c & 1:
                continue
            entry = M[r][c]
            if entry.terms:
                tail = rest(used | (1 << c))
                if tail.terms or tail.floor is not None:
                    term = compose(entry, tail, depth)
                    acc = acc + (-term if free_before % 2 else term)
            free_before += 1
        memo[used] = acc
        return acc

    return rest(0)


# -- even orthosymplectic blocks -----------------------------------------------


class TailMismatch(ArithmeticError):
    """The negative-degree part disagrees with the predicted a D^-1 a tail."""


def ak_bk(spec, ebar: Callable[[int, int], DiffPoly], level=1) -> Tuple[List[DOp], List[DOp]]:
    """A_0..A_m and B_0..B_m by the recursions along the first and last index.

    ``ebar(i, j)`` returns the polynomial attached to E_ij; m = |I| / 2.
    """
    N = spec.size
    m = N // 2
    c = lambda i: N + 1 - i  # noqa: E731
    T = spec.T
    kD = DOp.D().scale(level)

    def op(p: DiffPoly) -> DOp:
        return DOp.const(p)

    A = [DOp.const(1)]
    for k in range(1, m + 1):
        acc = compose(A[k - 1], kD + op(ebar(k, k)))
        for i in range(1, k):
            e = ebar(k, i) if k < m else ebar(m, i) - ebar(m + 1, i)
            acc = acc + compose(A[i - 1], op(e))
        A.append(acc)
    B = [DOp.const(1)]
    for k in range(1, m + 1):
        acc = compose(kD + op(ebar(c(k), c(k))), B[k - 1])
        for i in range(1, k):
            if k < m:
                e = ebar(c(i), c(k)).scale((-1) ** ((i + k + T(k, i)) % 2))
            else:
                # same sign rule as k < m; for even m it reduces to (-1)^(i + T_m(i))
                e = (ebar(c(i), c(m)) - ebar(c(i), c(m + 1))).scale((-1) ** ((i + m + T(m, i)) % 2))
            acc = acc + compose(op(e), B[i - 1])
        B.append(acc)
    return A, B


def block_sign(spec, k: int) -> int:
    """Sign of the A_{j-1} E_{k'j} B_{k-1} terms in the block expansion."""
    n = spec.n
    if spec.family.is_osp_even and spec.size == 4 * n:
        return (-1) ** ((k + spec.T(2 * n, k)) % 2)
    # the other sign, (-1)^(n + floor((k+1)/2)), disagrees with the generic determinant
    return (-1) ** ((n + 1 + (k + 1) // 2) % 2)


def rdet_osp_even(
    spec,
    A: Sequence[DOp],
    B: Sequence[DOp],
    ebar: Callable[[int, int], DiffPoly],
    floor: Optional[int] = None,
    level=1,
    sign: Optional[Callable[[int], int]] = None,
) -> Tuple[DOp, DiffPoly, DOp]:
    """Block expansion A_m D^-1 B_m + 2 sum_{j,k} s(k) A_{j-1} E_{k'j} B_{k-1}.

    Returns (polynomial part, a_m, full truncated series).  The negative part
    is checked against +-a_m D^-1 a_m down to the floor.
    """
    N = spec.size
    m = N // 2
    if floor is None:
        floor = default_floor(N)
    if floor > -1:
        raise FloorExhausted(f"floor {floor} leaves no negative tail to check; use -1 or lower")
    sign = sign or (lambda k: block_sign(spec, k))
    inv = DOp.D(-1).scale(Fraction(1) / Fraction(level))
    head = compose(A[m], compose(inv, B[m], floor - m), floor)
    body = DOp()
    for j in range(1, m + 1):
        for k in range(1, m + 1):
            e = ebar(N + 1 - k, j)
            if not e:
                continue
            term = compose(A[j - 1], compose(DOp.const(e), B[k - 1]))
            body = body + term.scale(2 * sign(k))
    full = head + body
    poly = DOp({key: c for key, c in full.terms.items() if key[1] >= 0})
    a = A[m].coeff(0)
    tail_sign = tail_sign_for(spec)
    predicted = compose(DOp.const(a), compose(inv, DOp.const(a), floor), floor).scale(tail_sign)
    for (k, i), c in full.terms.items():
        if i < 0 and c != predicted.terms.get((k, i), DiffPoly()):
            raise TailMismatch(f"coefficient of D^{i} differs from the predicted tail")
    for (k, i), c in predicted.terms.items():
        if i < 0 and (k, i) not in full.terms:
            raise TailMismatch(f"predicted tail term at D^{i} is missing")
    return poly, a, full


def tail_sign_for(spec) -> int:
    n = spec.n
    if spec.size == 4 * n:
        return (-1) ** (n % 2)
    return (-1) ** ((n + 1) % 2)

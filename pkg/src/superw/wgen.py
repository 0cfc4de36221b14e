"""Matrices, generators and the verification pipeline for each family."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
import itertools
import random
from functools import lru_cache
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .chibra import AffinePVA, jacobi_check, skew_check
from .dops import (
    DOp,
    FloorExhausted,
    TailMismatch,
    chi_plus_D_inverse,
    hessenberg_rdet,
    adjoint_star,
    ak_bk,
    block_sign,
    compose,
    default_floor,
    laplace_rdet,
    rdet_gl,
    rdet_osp_even,
    rdet_osp_odd,
    rdet_path,
    substitute_chi,
    tail_sign_for,
    ad_chi,
    to_right_form,
)
from .liesuper import (
    AlgebraSpec,
    Family,
    SuperElement,
    explicit_kerf,
    graded_dimensions,
    kerf_basis,
    kernel_of_ad_f,
    lie_bracket,
    rank,
)
from .superpoly import DiffPoly, InhomogeneousError, Symbol, delta_weight, linear_part

__all__ = [
    "Check",
    "Report",
    "Generator",
    "GeneratorSet",
    "BuiltMatrix",
    "build_matrix",
    "closed_form_blocks",
    "generators",
    "pi_sl",
    "verify_membership",
    "verify_weights",
    "verify_free_generation",
    "verify",
    "identities",
    "engine_identities",
    "axiom_report",
    "linear_part",
    "minimal_indices",
]


# -- reports -------------------------------------------------------------------


@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class Report:
    title: str
    checks: List[Check] = field(default_factory=list)
    notes: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, name: str, passed: bool, detail: str = "") -> Check:
        c = Check(name, bool(passed), detail)
        self.checks.append(c)
        return c

    def extend(self, other: "Report") -> None:
        self.checks.extend(other.checks)
        self.notes.extend(other.notes)

    def first_failure(self) -> Optional[Check]:
        return next((c for c in self.checks if not c.passed), None)

    def as_dict(self) -> dict:
        return {
            "title": self.title,
            "ok": self.ok,
            "checks": [{"name": c.name, "passed": c.passed, "detail": c.detail} for c in self.checks],
            "notes": list(self.notes),
        }


# -- generator containers ------------------------------------------------------


@dataclass
class Generator:
    label: str
    poly: DiffPoly
    t: int  # Delta weight is t/2

    @property
    def delta(self) -> Fraction:
        return Fraction(self.t, 2)


@dataclass
class GeneratorSet:
    spec: AlgebraSpec
    level: Fraction
    pva: AffinePVA
    items: List[Generator]
    minimal: List[str]
    rdet: Optional[DOp] = None
    tilde: Optional[str] = None

    def __getitem__(self, label: str) -> Generator:
        for g in self.items:
            if g.label == label:
                return g
        raise KeyError(label)

    @property
    def labels(self) -> List[str]:
        return [g.label for g in self.items]

    def minimal_items(self) -> List[Generator]:
        return [self[label] for label in self.minimal]


def minimal_indices(spec: AlgebraSpec) -> List[int]:
    """t with t = 0, 3 mod 4 for the orthosymplectic families; all t otherwise."""
    top = spec.size if not spec.family.is_osp_even else spec.size - 1
    if spec.family.is_sl:
        return list(range(2, top + 1))
    if not spec.family.is_osp:
        return list(range(1, top + 1))
    return [t for t in range(1, top + 1) if t % 4 in (0, 3)]


# -- matrices ------------------------------------------------------------------


@dataclass
class BuiltMatrix:
    spec: AlgebraSpec
    pva: AffinePVA
    level: Fraction
    entries: List[List[DOp]]
    blocks: Optional[Dict[str, List[List[DOp]]]] = None
    step_matrices: Optional[Dict[str, List[List[DOp]]]] = None

    @property
    def size(self) -> int:
        return len(self.entries)


def _gl_spec(spec: AlgebraSpec) -> AlgebraSpec:
    fam = Family.GL_PLUS if spec.family is Family.SL_PLUS else Family.GL_MINUS
    return AlgebraSpec(fam, spec.n)


def _ebar_factory(spec: AlgebraSpec, pva: AffinePVA) -> Callable[[int, int], DiffPoly]:
    @lru_cache(maxsize=None)
    def ebar(i: int, j: int) -> DiffPoly:
        return pva.bar(spec.fold_E(i, j))

    return ebar


def _const(c) -> DOp:
    return DOp.const(Fraction(c)) if c else DOp()


def build_matrix(spec: AlgebraSpec, level=1, pva: Optional[AffinePVA] = None) -> BuiltMatrix:
    """The operator matrix whose row determinant produces the generators.

    For sl the gl matrix is returned (generators are projected afterwards).
    ``level`` replaces D by level * D.
    """
    level = Fraction(level)
    fam = spec.family
    if fam.is_sl:
        spec = _gl_spec(spec)
    if pva is None:
        pva = AffinePVA(spec, level)
    N = spec.size
    kD = DOp.D().scale(level)
    f = spec.f
    if not fam.is_osp:
        rows = []
        for i in range(1, N + 1):
            row = []
            for j in range(1, N + 1):
                if j >= i:
                    # dual element e^{ji} = (-1)^{p(j)} e_{ji}
                    e = pva.bar(spec.unit(j, i)).scale((-1) ** spec.parity(j))
                    row.append((kD if i == j else DOp()) + DOp.const(e))
                else:
                    row.append(_const(-f[(i, j)]))
            rows.append(row)
        return BuiltMatrix(spec, pva, level, rows)
    ebar = _ebar_factory(spec, pva)
    if fam.is_osp_odd:
        rows = []
        for i in range(1, N + 1):
            row = []
            for j in range(1, N + 1):
                if j >= i:
                    row.append((kD if i == j else DOp()) + DOp.const(ebar(j, i)))
                elif i == j + 1:
                    row.append(_const(-((-1) ** spec.delta(j))))
                else:
                    row.append(DOp())
            rows.append(row)
        return BuiltMatrix(spec, pva, level, rows)
    return _build_even(spec, pva, level, ebar)


def _build_even(spec, pva, level, ebar) -> BuiltMatrix:
    N = spec.size
    m = N // 2
    kD = DOp.D().scale(level)
    f = spec.f
    # sum e_ii D + sum_{i >= j} e_ji (x) E_ij - f
    M = [[DOp() for _ in range(N)] for _ in range(N)]
    for r in range(1, N + 1):
        for c in range(1, N + 1):
            entry = DOp()
            if r == c:
                entry = entry + kD
            if c >= r:
                entry = entry + DOp.const(ebar(c, r))
            if f[(r, c)]:
                entry = entry - _const(f[(r, c)])
            M[r - 1][c - 1] = entry
    # column m <- column m - column m+1
    Nm = [row[:] for row in M]
    for r in range(N):
        Nm[r][m - 1] = M[r][m - 1] - M[r][m]
    # then row m+1 <- row m+1 - row m, taken in the column-modified matrix
    At = [row[:] for row in Nm]
    At[m] = [Nm[m][c] - Nm[m - 1][c] for c in range(N)]
    mu11 = [row[:m] for row in At[:m]]
    mu12 = [row[m:] for row in At[:m]]
    mu21 = [row[:m] for row in At[m:]]
    mu22 = [row[m:] for row in At[m:]]
    # the (N+1)-square matrix with D^-1 in the middle
    inv = DOp.D(-1).scale(Fraction(1) / level)
    full = []
    for r in range(N + 1):
        if r == m:
            full.append([inv if c == m else DOp() for c in range(N + 1)])
            continue
        src = At[r if r < m else r - 1]
        full.append(src[:m] + [DOp()] + src[m:])
    blocks = {"mu11": mu11, "mu12": mu12, "mu21": mu21, "mu22": mu22}
    steps = {"M": M, "N": Nm, "A": At}
    return BuiltMatrix(spec, pva, level, full, blocks, steps)


def closed_form_blocks(spec: AlgebraSpec, pva: AffinePVA, level=1) -> Dict[str, List[List[DOp]]]:
    """The four blocks written out entry by entry from their closed forms."""
    if not spec.family.is_osp_even:
        raise ValueError("closed-form blocks exist only for the even orthosymplectic families")
    level = Fraction(level)
    N = spec.size
    m = N // 2
    kD = DOp.D().scale(level)
    ebar = _ebar_factory(spec, pva)
    c = lambda i: N + 1 - i  # noqa: E731
    plus = N != 4 * spec.n
    E = lambda i, j: DOp.const(ebar(i, j))  # noqa: E731
    D_if = lambda cond: kD if cond else DOp()  # noqa: E731
    mu11 = [[DOp() for _ in range(m)] for _ in range(m)]
    mu22 = [[DOp() for _ in range(m)] for _ in range(m)]
    mu12 = [[DOp() for _ in range(m)] for _ in range(m)]
    mu21 = [[DOp() for _ in range(m)] for _ in range(m)]
    for i in range(1, m + 1):
        for j in range(1, m + 1):
            if i <= j == m:
                # the diagonal D sits at (m, m)
                mu11[i - 1][j - 1] = D_if(i == m) + E(m, i) - E(m + 1, i)
            elif i <= j < m:
                mu11[i - 1][j - 1] = D_if(i == j) + E(j, i)
            else:
                mu11[i - 1][j - 1] = _const(-1 if i - 1 == j else 0)
            # lower-right block is indexed from the bottom-right corner
            r, s = m + 1 - i, m + 1 - j
            if j <= i == m:
                val = D_if(j == m) + E(c(j), c(m)) - E(c(j), c(m + 1))
            elif j <= i < m:
                val = D_if(i == j) + E(c(j), c(i))
            else:
                sgn = (-1) ** ((i if plus else j) % 2)
                val = _const(sgn if i == j - 1 else 0)
            mu22[r - 1][s - 1] = val
            mu12[i - 1][m - j] = E(c(j), i)
            mu21[i - 1][j - 1] = kD.scale(-2) if (i == 1 and j == m) else DOp()
    return {"mu11": mu11, "mu12": mu12, "mu21": mu21, "mu22": mu22}


def compare_blocks(built: BuiltMatrix, closed: Dict[str, List[List[DOp]]]) -> List[str]:
    diffs = []
    for name in ("mu11", "mu12", "mu21", "mu22"):
        a, b = built.blocks[name], closed[name]
        for i, (ra, rb) in enumerate(zip(a, b)):
            for j, (x, y) in enumerate(zip(ra, rb)):
                if not (x - y).is_zero():
                    diffs.append(f"{name}[{i + 1},{j + 1}]: built {x.render()} vs closed {y.render()}")
    return diffs


def _submatrix(M, rows, cols):
    return [[M[r][c] for c in cols] for r in rows]


def direct_ak_bk(built: BuiltMatrix) -> Tuple[List[DOp], List[DOp]]:
    """A_k and B_k as row determinants of the corner blocks of mu11 and mu22."""
    mu11, mu22 = built.blocks["mu11"], built.blocks["mu22"]
    m = len(mu11)
    A = [DOp.const(1)] + [rdet_path(_submatrix(mu11, range(k), range(k))) for k in range(1, m + 1)]
    B = [DOp.const(1)] + [
        rdet_path(_submatrix(mu22, range(m - k, m), range(m - k, m))) for k in range(1, m + 1)
    ]
    return A, B


# -- sl projection -------------------------------------------------------------


class SlProjection:
    """Differential algebra map V(gl) -> V(sl) induced by A -> A - (str A / str I) I."""

    def __init__(self, gl_pva: AffinePVA, sl_pva: AffinePVA):
        self.gl = gl_pva
        self.sl = sl_pva
        spec = sl_pva.spec
        ident = spec.identity()
        self.s_id = ident.supertrace()
        self._images: Dict[int, DiffPoly] = {}
        for s in gl_pva.symbols:
            a = gl_pva.basis.elements[s.idx]
            a_sl = SuperElement(spec, dict(a.coeffs)) - ident * (a.supertrace() / self.s_id)
            self._images[s.idx] = sl_pva.bar(a_sl)

    def symbol_image(self, s: Symbol) -> DiffPoly:
        from .superpoly import apply_D_power

        return apply_D_power(self._images[s.idx], s.m)

    def __call__(self, p: DiffPoly) -> DiffPoly:
        return p.substitute(self.symbol_image)


def pi_sl(p: DiffPoly, gl_pva: AffinePVA, sl_pva: AffinePVA) -> DiffPoly:
    return SlProjection(gl_pva, sl_pva)(p)


# -- generators ----------------------------------------------------------------


def _row_determinant(built: BuiltMatrix) -> DOp:
    spec = built.spec
    if not spec.family.is_osp:
        return rdet_gl(built.entries)
    deltas = [spec.delta(j) for j in spec.indices]
    return rdet_osp_odd(built.entries, deltas, spec.n)


def generators(spec: AlgebraSpec, level=1, floor: Optional[int] = None) -> GeneratorSet:
    """Generators read off as D^k coefficients of the row determinant."""
    level = Fraction(level)
    fam = spec.family
    built = build_matrix(spec, level)
    pva = built.pva
    items: List[Generator] = []
    tilde = None
    if fam.is_osp_even:
        ebar = _ebar_factory(built.spec, pva)
        A, B = ak_bk(built.spec, ebar, level)
        poly, a, full = rdet_osp_even(built.spec, A, B, ebar, floor, level)
        top = spec.size - 1
        for t in range(1, top + 1):
            items.append(Generator(f"w{t}", poly.coeff(top - t), t))
        m = spec.size // 2
        tilde = f"wt{m}"
        items.append(Generator(tilde, a, m))
        rdet = full
    else:
        rdet = _row_determinant(built)
        top = built.spec.size
        for t in range(1, top + 1):
            items.append(Generator(f"w{t}", rdet.coeff(top - t), t))
    if fam.is_sl:
        sl_pva = AffinePVA(spec, level)
        proj = SlProjection(pva, sl_pva)
        items = [Generator(g.label, proj(g.poly), g.t) for g in items]
        pva = sl_pva
    minimal = [f"w{t}" for t in minimal_indices(spec)]
    if tilde:
        minimal.append(tilde)
    return GeneratorSet(spec, level, pva, items, minimal, rdet, tilde)


# -- verification --------------------------------------------------------------


def verify_membership(gens: GeneratorSet, labels: Optional[Sequence[str]] = None) -> Report:
    """pi-tilde {n chi w} = 0 for every basis element n of the nilpotent part."""
    pva = gens.pva
    rep = Report(f"membership {gens.spec.name}")
    todo = gens.items if labels is None else [gens[label] for label in labels]
    for g in todo:
        bad = []
        for s in pva.n_symbols():
            res = pva.membership_residual(s, g.poly)
            if not res.is_zero():
                bad.append(f"{s.label}: {res.render()}")
        rep.add(f"{g.label} in W", not bad, "; ".join(bad[:3]))
    return rep


def verify_weights(gens: GeneratorSet) -> Report:
    rep = Report(f"weights {gens.spec.name}")
    for g in gens.items:
        if g.poly.is_zero():
            rep.add(f"Delta({g.label}) = {g.delta}", True, "zero polynomial")
            continue
        try:
            d = delta_weight(g.poly)
        except InhomogeneousError as exc:
            rep.add(f"Delta({g.label}) = {g.delta}", False, str(exc))
            continue
        rep.add(f"Delta({g.label}) = {g.delta}", d == g.delta, f"got {d}")
    return rep


def poly_to_element(pva: AffinePVA, p: DiffPoly) -> SuperElement:
    """Inverse of bar on linear polynomials without derivatives."""
    spec = pva.spec
    out = spec.zero()
    for mono, c in p.terms.items():
        if len(mono) != 1 or mono[0].m:
            raise ValueError("not a linear underived polynomial")
        out = out + pva.basis.elements[mono[0].idx] * c
    return out


def _flatten(spec: AlgebraSpec, x: SuperElement) -> List[Fraction]:
    return [x[(i, j)] for i in spec.indices for j in spec.indices]


def scalar_multiple(p: DiffPoly, q: DiffPoly) -> Optional[Fraction]:
    """c with p = c q, or None."""
    if q.is_zero():
        return None if not p.is_zero() else Fraction(0)
    mono, qc = next(iter(q.terms.items()))
    c = p.terms.get(mono, Fraction(0)) / qc
    return c if p == q.scale(c) else None


def expected_linear_parts(spec: AlgebraSpec, pva: AffinePVA) -> Dict[str, DiffPoly]:
    """Exact linear parts where closed formulas for the kernel are available."""
    out: Dict[str, DiffPoly] = {}
    fam = spec.family
    if fam.is_osp_odd:
        for label, v in explicit_kerf(spec).items():
            t = int(label[1:])
            out[f"w{t}"] = pva.bar(v).scale((-1) ** t)
    elif fam is Family.OSP_EVEN:
        for label, v in explicit_kerf(spec).items():
            if label.startswith("vt"):
                out[f"wt{label[2:]}"] = pva.bar(v)
            else:
                out[f"w{label[1:]}"] = pva.bar(v)
    return out


def verify_free_generation(gens: GeneratorSet) -> Report:
    """Weights and linear parts of the minimal set against a basis of ker ad f."""
    spec, pva = gens.spec, gens.pva
    rep = Report(f"free generation {spec.name}")
    expected = expected_linear_parts(spec, pva)
    kdim = sum(len(kernel_of_ad_f(spec, d)) for d in range(-4 * spec.size, 1))
    elements = []
    for g in gens.minimal_items():
        lin = linear_part(g.poly)
        try:
            x = poly_to_element(pva, lin)
        except ValueError as exc:
            rep.add(f"{g.label}: linear part", False, str(exc))
            continue
        in_ker = lie_bracket(spec.f, x).is_zero() and not x.is_zero()
        deg_ok = x.degree2 == 1 - g.t
        rep.add(f"{g.label}: linear part nonzero, in ker ad f, degree {Fraction(1 - g.t, 2)}", in_ker and deg_ok)
        if g.label in expected:
            want = expected[g.label]
            if spec.family is Family.OSP_EVEN and g.label != gens.tilde:
                c = scalar_multiple(lin, want)
                rep.add(f"{g.label}: linear part is a multiple of the kernel vector", c is not None and c != 0,
                        f"got {lin.render()}, kernel vector {want.render()}")
                if c is not None:
                    rep.notes.append(f"{g.label}: linear part = {c} * kernel vector")
            else:
                rep.add(f"{g.label}: linear part equals expected kernel vector", lin == want,
                        f"got {lin.render()}, expected {want.render()}")
        else:
            basis = kernel_of_ad_f(spec, 1 - g.t)
            if len(basis) == 1 and in_ker:
                v = basis[0]
                key = next(k for k, c in v.coeffs.items() if c)
                rep.notes.append(f"{g.label}: linear part = {x[key] / v[key]} * kernel vector")
        elements.append(x)
    r = rank([_flatten(spec, x) for x in elements], spec.size ** 2) if elements else 0
    rep.add(f"linear parts span ker ad f (dim {kdim})", r == kdim == len(gens.minimal), f"rank {r}")
    return rep


def verify(spec: AlgebraSpec, level=1, floor: Optional[int] = None, gens: Optional[GeneratorSet] = None) -> Report:
    gens = gens or generators(spec, level, floor)
    rep = Report(f"verify {spec.name}")
    rep.extend(verify_membership(gens))
    rep.extend(verify_weights(gens))
    if gens.level == 1:
        rep.extend(verify_free_generation(gens))
    if spec.family.is_sl:
        rep.add("pi_sl(w1) = 0", gens["w1"].poly.is_zero())
    return rep


# -- identities of the even orthosymplectic construction ----------------------


def _cor_b_coefficients(A_m: DOp, B_m: DOp, n: int, m: int) -> Tuple[bool, List[str], Dict[str, bool]]:
    """b_{m-i} = (-1)^{floor((m+1)/2) + i(m-i) + floor((i+1)/2)} a_{m-i}, B written coefficients-right.

    a_{m-i} has parity m - i; for m = 2n the exponent reduces to n + i + floor((i+1)/2).
    """
    a = A_m.coeffs()
    b = to_right_form(B_m)
    lead = (m + 1) // 2
    bad = []
    for i in range(0, m + 1):
        ai = a.get(i, DiffPoly())
        bi = b.get(i, DiffPoly())
        sign = (-1) ** ((lead + i * (m - i) + (i + 1) // 2) % 2)
        if bi != ai.scale(sign):
            bad.append(f"i={i}")
    readings = {}
    if m == 2 * n:
        # the constant term on its own: which of the two readings holds
        a0, b0 = a.get(0, DiffPoly()), b.get(0, DiffPoly())
        an = a.get(m - n, DiffPoly())
        readings = {
            "b_m = (-1)^n a_m": b0 == a0.scale((-1) ** (n % 2)),
            "b_m = (-1)^(n+1) a_n": b0 == an.scale((-1) ** ((n + 1) % 2)),
        }
    return not bad, bad, readings


def identities(spec: AlgebraSpec, floor: Optional[int] = None, cases: int = 12, seed: int = 0) -> Report:
    """Engine identities on a seeded sample, then the construction identities of the family."""
    floor = floor if floor is not None else default_floor(spec.size)
    rep = Report(f"identities {spec.name}")
    rep.extend(engine_identities(spec, cases=cases, seed=seed, floor=floor))
    if spec.family.is_osp_even:
        rep.extend(_even_identities(spec, floor))
    else:
        rep.extend(_rdet_routes(spec))
    return rep


def _rdet_routes(spec: AlgebraSpec) -> Report:
    """The ordered path sum against two independently associated expansions."""
    rep = Report("row determinant routes")
    built = build_matrix(spec)
    main = _row_determinant(built)
    rep.add("path sum = last-column expansion", main == hessenberg_rdet(built.entries))
    rep.add("path sum = row-ordered determinant", main == laplace_rdet(built.entries))
    lead = main.coeff(spec.size)
    rep.add(f"leading coefficient of D^{spec.size} is 1", lead == DiffPoly.const(1))
    return rep


def _even_identities(spec: AlgebraSpec, floor: int) -> Report:
    """Construction identities for the even orthosymplectic families."""
    rep = Report(f"block identities {spec.name}")
    built = build_matrix(spec)
    pva = built.pva
    ebar = _ebar_factory(spec, pva)
    N, n = spec.size, spec.n
    m = N // 2
    closed = closed_form_blocks(spec, pva)
    diffs = compare_blocks(built, closed)
    rep.add("steps 1-5 blocks match closed-form entries", not diffs, "; ".join(diffs[:4]))
    A, B = ak_bk(spec, ebar)
    dA, dB = direct_ak_bk(built)
    for k in range(1, m + 1):
        rep.add(f"A_{k} recursion = corner row determinant", A[k] == dA[k])
        rep.add(f"B_{k} recursion = corner row determinant", B[k] == dB[k])
    for k in range(0, m + 1):
        sign = (-1) ** (((k + 1) // 2) % 2)
        rep.add(f"(B_{k})* = {sign:+d} A_{k}", adjoint_star(B[k]) == A[k].scale(sign))
    ok, bad, readings = _cor_b_coefficients(A[m], B[m], n, m)
    rep.add("b coefficients: b_{m-i} = (-1)^{floor((m+1)/2)+i(m-i)+floor((i+1)/2)} a_{m-i}", ok, ", ".join(bad))
    for name, holds in readings.items():
        rep.notes.append(f"constant term: '{name}' {'holds' if holds else 'fails'}")
    label = f"tail matches {tail_sign_for(spec):+d} a D^-1 a down to D^{floor}"
    try:
        poly, a, full = rdet_osp_even(spec, A, B, ebar, floor)
    except TailMismatch as exc:
        rep.add(label, False, str(exc))
        return rep
    rep.add(label, True)
    generic = laplace_rdet(built.entries, floor)
    rep.add("block expansion = generic row-ordered determinant", (generic - full).is_zero())
    if spec.size == 4 * n:
        rep.extend(_bracket_identities(spec, pva, A, B, floor))
    return rep


def _bracket_identities(spec, pva, A, B, floor) -> Report:
    """The projected adjoint action of F_{i,i+1} and F_{2n-1,2n+1} on A_k, B_k."""
    rep = Report("adjoint action on corner determinants")
    n = spec.n
    m = 2 * n
    D = DOp.D()
    chiD = DOp({(0, 1): DiffPoly.const(1), (1, 0): DiffPoly.const(1)})

    def act(i, j, X):
        return ad_chi(pva, pva.bar(spec.fold_F(i, j)), X, project=True)

    def sub(X):
        return substitute_chi(X)

    for i in range(1, m):
        for k in range(0, m + 1):
            want = sub(A[i - 1]).scale((-1) ** (i % 2)) if k == i else DOp()
            rep.add(f"ad F({i},{i + 1}) A_{k}", act(i, i + 1, A[k]) == want)
            want = B[i - 1] if k == i else DOp()
            rep.add(f"ad F({i},{i + 1}) B_{k}", act(i, i + 1, B[k]) == want)
    for k in range(0, m + 1):
        if k == m - 1:
            wa, wb = -sub(A[m - 2]), B[m - 2]
        elif k == m:
            wa = compose(sub(A[m - 2]), D).scale(-2)
            wb = compose(chiD, B[m - 2]).scale(-2)
        else:
            wa, wb = DOp(), DOp()
        rep.add(f"ad F({m - 1},{m + 1}) A_{k}", act(m - 1, m + 1, A[k]) == wa)
        rep.add(f"ad F({m - 1},{m + 1}) B_{k}", act(m - 1, m + 1, B[k]) == wb)
    return rep


# -- engine identities and axioms ------------------------------------------------


_CHI_PLUS_D = DOp({(0, 1): DiffPoly.const(1), (1, 0): DiffPoly.const(1)})


def random_poly(rng: random.Random, symbols: Sequence[Symbol], parity: Optional[int] = None,
                max_len: int = 2, max_deriv: int = 1) -> DiffPoly:
    """A nonzero monomial with small coefficient, of the requested parity if given."""
    while True:
        k = rng.randint(1, max_len)
        mono = [rng.choice(symbols).derive(rng.randint(0, max_deriv)) for _ in range(k)]
        p = DiffPoly.from_raw(mono, rng.choice((-3, -2, -1, 1, 2, 3)))
        if p and (parity is None or p.parity == parity):
            return p


def random_op(rng: random.Random, symbols: Sequence[Symbol], parity: int, lo: int = 0, hi: int = 2) -> DOp:
    """A homogeneous operator sum a_i D^i, lo <= i <= hi."""
    terms = {}
    for i in range(lo, hi + 1):
        if rng.random() < 0.7:
            terms[(0, i)] = random_poly(rng, symbols, (parity + i) % 2)
    if not terms:
        terms[(0, hi)] = random_poly(rng, symbols, (parity + hi) % 2)
    return DOp(terms)


def adjoint_shift_residuals(pva: AffinePVA, P: DiffPoly, A: DOp, floor: int) -> Tuple[DOp, DOp]:
    """Residuals of ad P (D A) = s (chi + D) ad P (A) and of its D^-1 analogue, s = (-1)^(p(P)+1)."""
    s = -1 if P.parity == 0 else 1
    adA = ad_chi(pva, P, A)
    r1 = ad_chi(pva, P, compose(DOp.D(), A)) - compose(_CHI_PLUS_D, adA).scale(s)
    lhs = ad_chi(pva, P, compose(DOp.D(-1), A, floor))
    r2 = lhs - compose(chi_plus_D_inverse(floor), adA, floor).scale(s)
    return r1, r2


def adjoint_product_residual(pva: AffinePVA, P: DiffPoly, A: DOp, pA: int, B: DOp) -> DOp:
    """ad P (AB) - (-1)^(p(A)(p(P)+1)) A(D + chi) ad P (B) - ad P (A) B."""
    sign = (-1) ** ((pA * (P.parity + 1)) % 2)
    rhs = compose(substitute_chi(A), ad_chi(pva, P, B)).scale(sign) + compose(ad_chi(pva, P, A), B)
    return ad_chi(pva, P, compose(A, B)) - rhs


def engine_identities(spec: AlgebraSpec, cases: int = 12, seed: int = 0, floor: Optional[int] = None) -> Report:
    """Operator-ring identities on a seeded random sample over the family's affine algebra."""
    floor = floor if floor is not None else default_floor(spec.size)
    rep = Report(f"engine identities {spec.name}")
    pva = AffinePVA(spec)
    syms = pva.symbols
    rng = random.Random(seed)
    bad = {"shift": 0, "inverse shift": 0, "product": 0, "involution": 0, "associativity": 0}
    for _ in range(cases):
        P = DiffPoly.sym(rng.choice(syms))
        pA, pB = rng.randint(0, 1), rng.randint(0, 1)
        A, B, C = random_op(rng, syms, pA), random_op(rng, syms, pB), random_op(rng, syms, rng.randint(0, 1))
        r1, r2 = adjoint_shift_residuals(pva, P, A, floor)
        bad["shift"] += not r1.is_zero()
        bad["inverse shift"] += not r2.is_zero()
        bad["product"] += not adjoint_product_residual(pva, P, A, pA, B).is_zero()
        bad["involution"] += adjoint_star(adjoint_star(A)) != A
        Ainv = compose(DOp.D(-1), A, floor)
        left = compose(compose(Ainv, B, floor), C, floor)
        right = compose(Ainv, compose(B, C, floor), floor)
        bad["associativity"] += left != right
    names = {
        "shift": "ad P (D A) = (-1)^(p(P)+1) (chi + D) ad P (A)",
        "inverse shift": f"ad P (D^-1 A) = (-1)^(p(P)+1) (chi + D)^-1 ad P (A) down to D^{floor}",
        "product": "ad P (AB) = (-1)^(p(A)(p(P)+1)) A(D + chi) ad P (B) + ad P (A) B",
        "involution": "A** = A",
        "associativity": f"(AB)C = A(BC) with D^-1 factors down to D^{floor}",
    }
    for key, label in names.items():
        rep.add(label, bad[key] == 0, f"{bad[key]} of {cases} cases fail" if bad[key] else f"{cases} cases")
    return rep


def axiom_report(spec: AlgebraSpec, level=1) -> Report:
    """Skewsymmetry on all ordered pairs and Jacobi on all ordered triples of generators."""
    pva = AffinePVA(spec, level)
    gens = [DiffPoly.sym(s) for s in pva.symbols]
    rep = Report(f"axioms {spec.name}")
    skew_bad = [(a, b) for a, b in itertools.product(gens, repeat=2) if not skew_check(pva, a, b).is_zero()]
    rep.add(f"skewsymmetry on {len(gens) ** 2} pairs", not skew_bad,
            ", ".join(f"({a}, {b})" for a, b in skew_bad[:3]))
    jac_bad = [t for t in itertools.product(gens, repeat=3) if not jacobi_check(pva, *t).is_zero()]
    rep.add(f"Jacobi identity on {len(gens) ** 3} triples", not jac_bad,
            ", ".join("(%s, %s, %s)" % t for t in jac_bad[:3]))
    return rep

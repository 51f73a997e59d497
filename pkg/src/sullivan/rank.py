"""Extensions over degree-2 bases, rational toral rank certificates and bounds."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

from .algebra import GeneratorTable, Polynomial, normalize
from .cohomology import DEFAULT_CAP, betti_table
from .model import (
    ContractError,
    SullivanModel,
    check_differential,
    format_model,
    nilpotent_order,
    parse_model,
    translate,
)
from .purity import EllipticityReport, is_elliptic
from .structure import (
    NotTwoStageError,
    TwoStageDecomposition,
    hypothesis_check,
    maximality,
    two_stage_split,
)


@dataclass(frozen=True)
class ExtensionSpec:
    """Total space (Lambda A (x) Lambda W, D) of an extension over base generators A."""

    fibre: SullivanModel
    total: SullivanModel

    @property
    def base(self) -> tuple:
        return tuple(self.total.base)

    @property
    def n(self) -> int:
        return len(self.total.base)

    def to_text(self) -> str:
        return format_model(self.total)


def extension_from_text(fibre: SullivanModel, text: str) -> ExtensionSpec:
    total = parse_model(text)
    return ExtensionSpec(fibre, total)


@dataclass
class Certificate:
    spec: ExtensionSpec
    audit: list  # (check name, passed, detail)
    ellipticity: EllipticityReport | None = None

    @property
    def valid(self) -> bool:
        return all(ok for _, ok, _ in self.audit) and len(self.audit) == len(CHECKS)

    @property
    def verdict(self) -> int | None:
        """Certified lower bound on rk0 of the fibre, or None."""
        return self.spec.n if self.valid else None

    def failures(self) -> list:
        return [(name, detail) for name, ok, detail in self.audit if not ok]

    def lines(self) -> list:
        out = [f"check.{name} = {'pass' if ok else 'fail'}" + (f"  # {detail}" if detail and not ok else "")
               for name, ok, detail in self.audit]
        out.append(f"certificate.valid = {str(self.valid).lower()}")
        if self.valid:
            out.append(f"rk0 >= {self.spec.n}")
        return out


CHECKS = ("base", "restriction", "d_squared", "ks_order", "elliptic")


def verify_extension(spec: ExtensionSpec) -> Certificate:
    """Run the five checks in order; stops at the first failure."""
    total, fibre = spec.total, spec.fibre
    ttab = total.table
    base = set(total.base)
    audit = []

    # 1. base generators: degree 2, D a = 0; fibre generators all present
    bad = [n for n in total.base if ttab[ttab.id_of(n)].degree != 2 or total.d_gen(n)]
    missing = [n for n in fibre.table.names if n not in ttab or n in base]
    extra = [n for n in ttab.names if n not in base and n not in fibre.table]
    wrong_deg = [n for n in fibre.table.names if n in ttab and
                 ttab[ttab.id_of(n)].degree != fibre.table[fibre.table.id_of(n)].degree]
    detail = "; ".join(filter(None, [
        bad and f"base generators not degree-2 cocycles: {', '.join(bad)}",
        missing and f"fibre generators missing: {', '.join(missing)}",
        extra and f"unknown generators: {', '.join(extra)}",
        wrong_deg and f"degree mismatch: {', '.join(wrong_deg)}"]))
    audit.append(("base", not detail, detail))
    if detail:
        return Certificate(spec, audit)

    # 2. D == d modulo the ideal generated by the base
    base_ids = {ttab.id_of(n) for n in base}
    to_fibre = {ttab.id_of(n): fibre.table.id_of(n) for n in fibre.table.names}
    detail = ""
    for g in fibre.table:
        D = total.d_gen(g.name)
        reduced = normalize(fibre.table, [
            (c, [(to_fibre[h], e) for h, e in m]) for m, c in D.terms.items()
            if not any(h in base_ids for h, _ in m)])
        residue = reduced - fibre.d_gen(g.id)
        if residue:
            detail = f"D{g.name} - d{g.name} = {residue} mod base"
            break
    audit.append(("restriction", not detail, detail))
    if detail:
        return Certificate(spec, audit)

    # 3. D^2 = 0
    rep = check_differential(total)
    detail = ""
    if not rep.d_squared_zero:
        name, val = next(iter(rep.d_squared.items()))
        detail = f"D^2 {name} = {val}"
    audit.append(("d_squared", not detail, detail))
    if detail:
        return Certificate(spec, audit)

    # 4. K-S ordering of the fibre generators over the base
    order = nilpotent_order(total, [ttab.id_of(n) for n in fibre.table.names])
    detail = "" if order is not None else "no ordering with D w_i in Lambda A (x) Lambda(w_<i)"
    audit.append(("ks_order", order is not None, detail))
    if detail:
        return Certificate(spec, audit)

    # 5. the total space is elliptic
    ell = is_elliptic(total)
    detail = "" if ell.elliptic else "pure ideal is not zero-dimensional"
    audit.append(("elliptic", ell.elliptic, detail))
    return Certificate(spec, audit, ell)


def _base_names(model: SullivanModel, n: int) -> list:
    taken = set(model.table.names)
    names = []
    k = 1
    while len(names) < n:
        cand = f"a{k}" if n > 1 else "a"
        if n == 1 and cand in taken:
            cand = "a1"
        while cand in taken or cand in names:
            cand += "'"
        names.append(cand)
        k += 1
    return names


def with_base(model: SullivanModel, base_names: list, perturb: dict) -> ExtensionSpec:
    """Total model Lambda(a_1..a_n) (x) Lambda W, D = d + perturbation on selected generators.

    `perturb` maps fibre generator names to callables building the added
    polynomial over the total table.
    """
    pairs = [(a, 2) for a in base_names] + [(g.name, g.degree) for g in model.table]
    table = GeneratorTable.from_pairs(pairs)
    k = len(base_names)
    idmap = {i: k + i for i in range(len(model.table))}
    diff = {k + i: translate(v, table, idmap) for i, v in model.differential.items()}
    for name, build in perturb.items():
        j = table.id_of(name)
        diff[j] = diff.get(j, Polynomial.zero(table)) + build(table)
    total = SullivanModel(table, diff, f"{model.name}+ext" if model.name else "", tuple(base_names))
    return ExtensionSpec(model, total)


def construct_lemma_extension(model: SullivanModel, decomp: TwoStageDecomposition | None,
                              vpp) -> ExtensionSpec:
    """D v_i = d v_i + a_i^((|v_i|+1)/2) for v_i in vpp, D = d otherwise."""
    table = model.table
    names = [table[v].name if isinstance(v, int) else v for v in vpp]
    for n in names:
        deg = table[table.id_of(n)].degree
        if deg % 2 == 0:
            raise ValueError(f"{n} has even degree {deg}; the perturbation needs odd generators")
        if decomp is not None and table.id_of(n) not in decomp.V:
            raise ValueError(f"{n} is not in V")
    base = _base_names(model, len(names))
    perturb = {}
    for a, n in zip(base, names):
        k = (table[table.id_of(n)].degree + 1) // 2
        perturb[n] = (lambda a, k: lambda t: Polynomial.gen(t, a) ** k)(a, k)
    return with_base(model, base, perturb)


@dataclass
class SearchResult:
    certificate: Certificate
    tried: int
    partial: bool
    expected: int | None  # dim V - dim U_even when V is odd and U_even has one degree
    defect: bool  # expected bound not reached

    @property
    def n(self) -> int:
        return self.certificate.spec.n


def lemma_hypothesis(decomp: TwoStageDecomposition) -> bool:
    table = decomp.model.table
    return decomp.V_odd and len({table[i].degree for i in decomp.U_even}) <= 1


def search_lower_bound(model: SullivanModel, decomp: TwoStageDecomposition | None = None,
                       budget: int | None = None) -> SearchResult:
    """Largest subset of V whose lemma-shaped extension has an elliptic total.

    Subsets are tried by decreasing size, lexicographically within a size.
    """
    decomp = decomp or two_stage_split(model)
    odd_v = [v for v in decomp.V if model.table.is_odd(v)]
    expected = decomp.r - decomp.q if lemma_hypothesis(decomp) else None
    tried = 0
    partial = False
    best = None
    for size in range(len(odd_v), -1, -1):
        for subset in combinations(odd_v, size):
            if budget is not None and tried >= budget:
                partial = True
                break
            tried += 1
            spec = construct_lemma_extension(model, decomp, list(subset))
            cert = verify_extension(spec)
            if cert.valid:
                best = cert
                break
        if best is not None or partial:
            break
    if best is None:
        best = verify_extension(construct_lemma_extension(model, decomp, []))
    defect = expected is not None and not partial and best.spec.n < expected
    return SearchResult(best, tried, partial, expected, defect)


@dataclass
class Bound:
    value: int
    source: str


@dataclass
class RankBounds:
    lower: Bound
    upper_chi: Bound
    upper_thm: Bound | None
    dimV_minus_dimUeven: int | None
    total_dim_H: int
    two_stage: bool
    maximal: bool | None
    annotations: list = field(default_factory=list)
    search: SearchResult | None = None

    @property
    def upper(self) -> Bound:
        cands = [self.upper_chi] + ([self.upper_thm] if self.upper_thm else [])
        return min(cands, key=lambda b: b.value)

    @property
    def exact(self) -> bool:
        return self.lower.value == self.upper.value

    @property
    def consistent(self) -> bool:
        return self.lower.value <= self.upper.value

    @property
    def trc_holds(self) -> bool:
        return self.total_dim_H >= 2 ** self.lower.value

    def lines(self) -> list:
        out = [
            f"rk0.lower = {self.lower.value}",
            f"rk0.lower.source = {self.lower.source}",
            f"rk0.upper = {self.upper.value}",
            f"rk0.upper.source = {self.upper.source}",
            f"rk0.upper_chi = {self.upper_chi.value}",
            f"rk0.upper_thm = {self.upper_thm.value if self.upper_thm else 'unknown'}",
            f"rk0.exact = {str(self.exact).lower()}",
        ]
        if self.dimV_minus_dimUeven is not None:
            out.append(f"dimV_minus_dimU_even = {self.dimV_minus_dimUeven}")
        out += [
            f"trc.lhs = {self.total_dim_H}",
            f"trc.rhs = 2^{self.lower.value}",
            f"trc.holds = {str(self.trc_holds).lower()}",
        ]
        for note in self.annotations:
            out.append(f"note = {note}")
        return out


def rank_bounds(model: SullivanModel, certificates=(), *, budget: int | None = 4096,
                annotations=(), cap: int = DEFAULT_CAP) -> RankBounds:
    ell = is_elliptic(model, witnesses=False)
    if not ell.elliptic:
        raise ContractError("rank bounds need an elliptic model")
    total_H = betti_table(model, elliptic=ell, cap=cap).total
    upper_chi = Bound(-model.chi_pi, "homotopy Euler characteristic")
    lower = Bound(0, "trivial")
    upper_thm = None
    gap = None
    two_stage = True
    maximal = None
    search = None
    notes = list(annotations)
    try:
        decomp = two_stage_split(model)
    except NotTwoStageError:
        two_stage = False
        decomp = None
    if decomp is not None:
        ma = maximality(model, decomp)
        maximal = ma.maximal
        work = ma.repaired if not ma.maximal else decomp
        if not ma.maximal:
            notes.append(f"V enlarged from {decomp.r} to {work.r} by basis change in U")
        gap = work.r - work.q
        hyp = hypothesis_check(work.model, work)
        minimal = check_differential(work.model).minimal
        if minimal and hyp.quadratic_differential and (
                hyp.condition_A is not None or hyp.condition_B is not None):
            cond = "A" if hyp.condition_A is not None else "B"
            upper_thm = Bound(gap, f"quadratic two-stage, maximal V, condition {cond}")
        if minimal and hyp.odd_only and hyp.stable_separated is not None:
            b = Bound(work.r, "odd-only stable and separated, maximal V")
            if upper_thm is None or b.value < upper_thm.value:
                upper_thm = b
        search = search_lower_bound(work.model, work, budget)
        if search.certificate.valid and search.n > lower.value:
            lower = Bound(search.n, "lemma-shaped extension search")
        if search.defect:
            notes.append(f"search found {search.n} < expected {search.expected}")
    for cert in certificates:
        if not cert.valid:
            continue
        if cert.spec.fibre != model and not (decomp is not None and cert.spec.fibre == work.model):
            continue
        if cert.spec.n > lower.value:
            lower = Bound(cert.spec.n, "supplied extension certificate")
    out = RankBounds(lower, upper_chi, upper_thm, gap, total_H, two_stage, maximal, notes, search)
    if gap is not None and lower.value > gap:
        out.annotations.append(f"certified lower bound {lower.value} exceeds dimV - dimU_even = {gap}")
    if lower.value < out.upper.value:
        out.annotations.append(f"rk0 is between {lower.value} and {out.upper.value}")
    return out


def extension_summary(cert: Certificate) -> list:
    lines = cert.lines()
    if cert.ellipticity is not None:
        ideal = cert.ellipticity.ideal
        lines += [f"pure_ideal = ({', '.join(ideal.format())})"]
        lines += cert.ellipticity.lines()[1:]
    return lines


__all__ = [
    "Certificate", "ExtensionSpec", "RankBounds", "SearchResult",
    "construct_lemma_extension", "extension_from_text", "rank_bounds", "search_lower_bound",
    "extension_summary", "verify_extension", "with_base",
]

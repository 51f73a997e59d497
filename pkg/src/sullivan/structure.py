"""Two-stage structure: decomposition, maximal V, skew block matrices,
rank-bound hypotheses, Gottlieb dimensions and Wang derivations."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .algebra import GeneratorTable, Polynomial, mono_mul, normalize, word_length
from .cohomology import DEFAULT_CAP, InducedMap, induced_map_on_H
from .linalg import inverse, mat_mul, nullspace, rank as q_rank, rref
from .model import (
    ContractError,
    Derivation,
    ModelMorphism,
    SullivanModel,
    apply_derivation,
    formal_dimension,
)
from .purity import is_elliptic


class NotTwoStageError(ValueError):
    pass


@dataclass(frozen=True)
class TwoStageDecomposition:
    model: SullivanModel
    U: tuple  # generator ids
    V: tuple

    @property
    def U_odd(self) -> tuple:
        return tuple(i for i in self.U if self.model.table.is_odd(i))

    @property
    def U_even(self) -> tuple:
        return tuple(i for i in self.U if not self.model.table.is_odd(i))

    @property
    def p(self) -> int:
        return len(self.U_odd)

    @property
    def q(self) -> int:
        return len(self.U_even)

    @property
    def r(self) -> int:
        return len(self.V)

    @property
    def V_odd(self) -> bool:
        return all(self.model.table.is_odd(i) for i in self.V)

    def names(self, ids) -> list:
        return [self.model.table[i].name for i in ids]

    def lines(self) -> list:
        return [
            "two_stage = true",
            "U = " + " ".join(self.names(self.U)),
            "V = " + " ".join(self.names(self.V)),
            f"dimU_odd = {self.p}",
            f"dimU_even = {self.q}",
            f"dimV = {self.r}",
        ]


def two_stage_split(model: SullivanModel) -> TwoStageDecomposition:
    """Greedy split preferring V: cocycles used by some differential (or even) go to U."""
    table = model.table
    cocycles = {g.id for g in table if not model.d_gen(g.id)}
    used = set()
    for g in table:
        used |= model.d_gen(g.id).support()
    U = tuple(i for i in range(len(table)) if i in cocycles and (i in used or not table.is_odd(i)))
    V = tuple(i for i in range(len(table)) if i not in U)
    Uset = set(U)
    for v in V:
        bad = model.d_gen(v).support() - Uset
        if bad:
            names = ", ".join(table[i].name for i in sorted(bad))
            raise NotTwoStageError(
                f"not two-stage: d{table[v].name} involves {names}, which are not cocycles")
    return TwoStageDecomposition(model, U, V)


def contract(table: GeneratorTable, u, p: Polynomial) -> Polynomial:
    """i_{u*}: the derivation of degree -|u| sending u to 1 and other generators to 0."""
    i = table.id_of(u) if isinstance(u, str) else u
    theta = Derivation(table, -table[i].degree, {i: Polynomial.one(table)})
    return apply_derivation(theta, p)


@dataclass
class MaximalityAnalysis:
    decomposition: TwoStageDecomposition
    L_matrix: dict  # U-degree -> (row labels, rows); columns are the U generators of that degree
    K_basis: list  # dicts {u id: coefficient} spanning ker L
    maximal: bool
    repair: ModelMorphism | None = None  # repaired model -> original model
    repaired: TwoStageDecomposition | None = None
    passes: int = 0

    def lines(self) -> list:
        out = [f"maximal = {str(self.maximal).lower()}", f"dimK = {len(self.K_basis)}"]
        if self.repaired is not None:
            out.append(f"repaired.dimV = {self.repaired.r}")
        return out


def _lie_matrix(decomp: TwoStageDecomposition, ids) -> tuple:
    model = decomp.model
    table = model.table
    cols = []
    for u in ids:
        col = {}
        for v in decomp.V:
            for m, c in contract(table, u, model.d_gen(v)).terms.items():
                col[(v, m)] = c
        cols.append(col)
    labels = sorted({k for col in cols for k in col}, key=lambda k: (k[0], k[1]))
    pos = {k: i for i, k in enumerate(labels)}
    rows = [dict() for _ in labels]
    for j, col in enumerate(cols):
        for k, c in col.items():
            rows[pos[k]][j] = c
    return labels, rows


def _one_pass(decomp: TwoStageDecomposition):
    """Kernel of u* -> i_{u*} d|_V per U-degree, and the repaired model when nonzero."""
    model = decomp.model
    table = model.table
    by_degree: dict = {}
    for u in decomp.U:
        by_degree.setdefault(table[u].degree, []).append(u)
    L = {}
    K = []
    subst = {}  # old u id -> polynomial in new generators
    phi = {}  # new u id -> polynomial in old generators
    moved = []
    for deg, ids in sorted(by_degree.items()):
        labels, rows = _lie_matrix(decomp, ids)
        L[deg] = (labels, rows)
        ker = nullspace(rows, len(ids))
        if not ker:
            continue
        K.extend({ids[j]: c for j, c in v.items()} for v in ker)
        red, piv = rref([{j: c for j, c in v.items()} for v in ker])
        pivset = set(piv)
        # K-perp basis: one vector per free column; X-perp: the pivot generators
        perp = nullspace(red, len(ids))
        for vec in perp:
            f = next(j for j in vec if j not in pivset)
            phi[ids[f]] = sum((Polynomial.gen(table, ids[j]).scale(c) for j, c in sorted(vec.items())),
                              Polynomial.zero(table))
            subst[ids[f]] = Polynomial.gen(table, ids[f]) - sum(
                (Polynomial.gen(table, ids[j]).scale(c) for j, c in vec.items() if j in pivset),
                Polynomial.zero(table))
        moved.extend(ids[c] for c in piv)
    if not K:
        return L, K, None, None
    back = ModelMorphism(model, model, {i: subst.get(i, Polynomial.gen(table, i)) for i in range(len(table))})
    diff = {}
    for v in decomp.V:
        diff[v] = back(model.d_gen(v))
    new_model = SullivanModel(table, diff, model.name, model.base)
    values = {i: phi.get(i, Polynomial.gen(table, i)) for i in range(len(table))}
    morph = ModelMorphism(new_model, model, values)
    movedset = set(moved)
    new_U = tuple(u for u in decomp.U if u not in movedset)
    new_V = tuple(sorted(set(decomp.V) | movedset))
    for v in new_V:
        if new_model.d_gen(v).support() - set(new_U):
            raise ContractError("maximality repair left a V differential outside Lambda U")
    return L, K, morph, TwoStageDecomposition(new_model, new_U, new_V)


def _compose(outer: ModelMorphism, inner: ModelMorphism) -> ModelMorphism:
    """outer o inner, where inner.target == outer.source."""
    return ModelMorphism(inner.source, outer.target,
                         {i: outer(v) for i, v in inner.values.items()})


def maximality(model: SullivanModel, decomp: TwoStageDecomposition | None = None) -> MaximalityAnalysis:
    decomp = decomp or two_stage_split(model)
    L, K, morph, new = _one_pass(decomp)
    if morph is None:
        return MaximalityAnalysis(decomp, L, K, True)
    total = morph
    current = new
    passes = 1
    while True:
        _, K2, m2, new2 = _one_pass(current)
        if m2 is None:
            break
        if new2.r <= current.r:
            raise ContractError("maximality repair did not enlarge V")
        total = _compose(total, m2)
        current = new2
        passes += 1
    return MaximalityAnalysis(decomp, L, K, False, total, current, passes)


class NonQuadraticError(ValueError):
    pass


@dataclass
class QuadraticBlockMatrix:
    blocks: list  # r skew-symmetric p x p matrices (lists of Fractions)
    p: int
    rank: int
    left_inverse: list | None  # p x rp matrix N with N M = I when it exists

    @property
    def stacked(self) -> list:
        return [row for blk in self.blocks for row in blk]

    @property
    def left_inverse_exists(self) -> bool:
        return self.rank == self.p

    def lines(self) -> list:
        out = []
        for k, blk in enumerate(self.blocks, 1):
            for row in blk:
                out.append(f"M{k} | " + " ".join(str(x) for x in row))
        out.append(f"rank = {self.rank}")
        out.append(f"p = {self.p}")
        out.append(f"left_inverse = {str(self.left_inverse_exists).lower()}")
        return out


def quadratic_block_matrix(model: SullivanModel, decomp: TwoStageDecomposition | None = None) -> QuadraticBlockMatrix:
    decomp = decomp or two_stage_split(model)
    table = model.table
    uodd = decomp.U_odd
    pos = {u: k for k, u in enumerate(uodd)}
    p = len(uodd)
    blocks = []
    for v in decomp.V:
        dv = model.d_gen(v)
        blk = [[Fraction(0)] * p for _ in range(p)]
        for m, c in dv.terms.items():
            if word_length(m) != 2:
                raise NonQuadraticError(
                    f"d{table[v].name} is not quadratic; use maximality() instead")
            if len(m) == 2 and m[0][0] in pos and m[1][0] in pos:
                i, j = pos[m[0][0]], pos[m[1][0]]
                blk[i][j] = c
                blk[j][i] = -c
        blocks.append(blk)
    M = [row for blk in blocks for row in blk]
    rk = q_rank([{j: x for j, x in enumerate(r) if x} for r in M])
    N = None
    if p and rk == p:
        Mt = [[M[i][j] for i in range(len(M))] for j in range(p)]
        N = mat_mul(inverse(mat_mul(Mt, M)), Mt)
    elif p == 0:
        N = []
    return QuadraticBlockMatrix(blocks, p, rk, N)


def is_quadratic(model: SullivanModel, decomp: TwoStageDecomposition) -> bool:
    return all(word_length(m) == 2 for v in decomp.V for m in model.d_gen(v).terms)


def connected(degrees, n) -> bool:
    """A graded space is n-connected when it vanishes in degrees <= n."""
    return all(d > n for d in degrees)


def coconnected(degrees, n) -> bool:
    """n-co-connected: vanishes in degrees >= n."""
    return all(d < n for d in degrees)


@dataclass
class HypothesisReport:
    pure: bool
    odd_only: bool
    quadratic_differential: bool
    U_even_single_degree: bool
    condition_A: int | None  # witnessing r
    condition_B: int | None  # witnessing s
    stable_separated: tuple | None  # witnessing (r, s, t, u)
    chi_pi: int

    def lines(self) -> list:
        def b(x):
            return str(bool(x)).lower()
        out = [
            f"pure = {b(self.pure)}",
            f"odd_only = {b(self.odd_only)}",
            f"quadratic = {b(self.quadratic_differential)}",
            f"U_even_single_degree = {b(self.U_even_single_degree)}",
            f"condition_A = {b(self.condition_A is not None)}",
            f"condition_B = {b(self.condition_B is not None)}",
            f"stable_separated = {b(self.stable_separated is not None)}",
            f"chi_pi = {self.chi_pi}",
        ]
        if self.condition_A is not None:
            out.append(f"condition_A.r = {self.condition_A}")
        if self.condition_B is not None:
            out.append(f"condition_B.s = {self.condition_B}")
        if self.stable_separated is not None:
            out.append("stable_separated.rstu = " + " ".join(map(str, self.stable_separated)))
        return out


def hypothesis_check(model: SullivanModel, decomp: TwoStageDecomposition | None = None) -> HypothesisReport:
    from .purity import is_pure

    decomp = decomp or two_stage_split(model)
    table = model.table
    uo = [table[i].degree for i in decomp.U_odd]
    ue = [table[i].degree for i in decomp.U_even]
    vd = [table[i].degree for i in decomp.V]
    top = max(table.degrees, default=1) + 2
    cond_a = next((r for r in range(1, top + 1)
                   if connected(uo, 2 * r - 1) and coconnected(ue, 2 * r + 2)), None)
    cond_b = next((s for s in range(1, top + 1)
                   if coconnected(uo, 2 * s + 1) and connected(ue, 4 * s - 4)), None)
    odd_only = all(g.odd for g in table)
    stable = None
    if odd_only:
        for r in range(top, 0, -1):
            for s in range(r, 2 * r + 1):
                if not (connected(uo, r - 1) and coconnected(uo, s + 1)):
                    continue
                for t in range(s + r, s - 1, -1):
                    for u in range(t, s + r + 1):
                        if connected(vd, t - 1) and coconnected(vd, u + 1):
                            stable = (r, s, t, u)
                            break
                    if stable:
                        break
                if stable:
                    break
            if stable:
                break
    return HypothesisReport(
        pure=is_pure(model),
        odd_only=odd_only,
        quadratic_differential=is_quadratic(model, decomp),
        U_even_single_degree=len(set(ue)) <= 1,
        condition_A=cond_a,
        condition_B=cond_b,
        stable_separated=stable,
        chi_pi=model.chi_pi,
    )


# ---------- Gottlieb groups ----------

def gottlieb_dim(model: SullivanModel, n: int) -> int:
    """dim G_n: degree-n generator duals that extend to derivations commuting with d."""
    table = model.table
    unknowns = []  # (generator id, monomial)
    for g in table:
        for m in table.basis(g.degree - n):
            unknowns.append((g.id, m))
    if not unknowns:
        return 0
    targets = [i for i, (g, m) in enumerate(unknowns) if table[g].degree == n]
    if not targets:
        return 0
    sign = -1 if n & 1 else 1
    columns = []
    for g, m in unknowns:
        theta = Derivation(table, -n, {g: Polynomial._raw(table, {m: Fraction(1)})})
        col = {}
        for h in table:
            expr = model.d(theta.on(h.id)) - apply_derivation(theta, model.d_gen(h.id)).scale(sign)
            for mm, c in expr.terms.items():
                col[(h.id, mm)] = c
        columns.append(col)
    labels = sorted({k for c in columns for k in c})
    pos = {k: i for i, k in enumerate(labels)}
    rows = [dict() for _ in labels]
    for j, col in enumerate(columns):
        for k, c in col.items():
            rows[pos[k]][j] = c
    sol = nullspace(rows, len(unknowns))
    tset = set(targets)
    projected = [{j: c for j, c in v.items() if j in tset} for v in sol]
    return q_rank(projected)


@dataclass
class GottliebReport:
    dims: dict  # generator degree -> dim G_n

    @property
    def total(self) -> int:
        return sum(self.dims.values())

    def lines(self) -> list:
        out = [f"gottlieb[{n}] = {d}" for n, d in sorted(self.dims.items())]
        out.append(f"gottlieb.total = {self.total}")
        return out


def gottlieb(model: SullivanModel) -> GottliebReport:
    degrees = sorted(set(model.table.degrees))
    return GottliebReport({n: gottlieb_dim(model, n) for n in degrees})


# ---------- Wang derivation ----------

@dataclass
class WangData:
    base: str
    fibre: SullivanModel
    theta: Derivation
    induced: InducedMap
    total_dim: int | None = None

    @property
    def dim_ker(self) -> int:
        return self.induced.total_ker

    @property
    def dim_coker(self) -> int:
        return self.induced.total_coker

    @property
    def exact(self) -> bool | None:
        if self.total_dim is None:
            return None
        return self.total_dim == self.dim_ker + self.dim_coker

    def lines(self) -> list:
        out = [f"wang.base = {self.base}", f"wang.ker = {self.dim_ker}", f"wang.coker = {self.dim_coker}",
               f"wang.squared_zero = {str(self.induced.squared_is_zero()).lower()}"]
        if self.total_dim is not None:
            out.append(f"wang.total = {self.total_dim}")
            out.append(f"wang.exact = {str(self.exact).lower()}")
        for g in self.fibre.table:
            v = self.theta.on(g.id)
            if v:
                out.append(f"theta({g.name}) = {v}")
        return out


def wang(model: SullivanModel, u0, *, total: bool = True, cap: int = DEFAULT_CAP) -> WangData:
    """Split off a single odd cocycle generator u0: d = d_bar + u0*theta."""
    table = model.table
    i0 = table.id_of(u0) if isinstance(u0, str) else u0
    name0 = table[i0].name
    if not table.is_odd(i0):
        raise ValueError(f"{name0} has even degree; the Wang base must be odd")
    if model.d_gen(i0):
        raise ValueError(f"{name0} is not a cocycle")
    ftable = GeneratorTable.from_pairs((g.name, g.degree) for g in table if g.id != i0)
    fid = {g.id: ftable.id_of(g.name) for g in table if g.id != i0}
    dbar = {}
    theta_vals = {}
    for g in table:
        if g.id == i0:
            continue
        rest, along = [], []
        for m, c in model.d_gen(g.id).terms.items():
            if any(h == i0 for h, _ in m):
                # m = sign * u0 * m'
                mprime = tuple(f for f in m if f[0] != i0)
                s, back = mono_mul(table, ((i0, 1),), mprime)
                if back != m:
                    raise ContractError("internal: failed to factor out the base generator")
                along.append((c * s, [(fid[h], e) for h, e in mprime]))
            else:
                rest.append((c, [(fid[h], e) for h, e in m]))
        j = fid[g.id]
        dbar[j] = normalize(ftable, rest)
        t = normalize(ftable, along)
        if t:
            theta_vals[j] = t
    fibre = SullivanModel(ftable, dbar, f"{model.name}/{name0}" if model.name else "")
    theta = Derivation(ftable, 1 - table[i0].degree, theta_vals)
    fel = is_elliptic(fibre, witnesses=False)
    if not fel.elliptic:
        raise ContractError("Wang fibre is not elliptic; cohomology window is unbounded")
    fd = formal_dimension(fibre, fel)
    induced = induced_map_on_H(fibre, theta, fd, cap=cap)
    tot = None
    if total:
        from .cohomology import betti_table
        tot = betti_table(model, elliptic=is_elliptic(model, witnesses=False), cap=cap).total
    return WangData(name0, fibre, theta, induced, tot)

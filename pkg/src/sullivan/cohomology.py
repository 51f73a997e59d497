"""Degree-wise cohomology of finite Sullivan models."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .algebra import Polynomial
from .linalg import TaggedEchelon, nullspace, rref, sparse_rank, transpose
from .model import ContractError, Derivation, SullivanModel, apply_derivation, formal_dimension

DEFAULT_CAP = 2_000_000


class ResourceCapError(RuntimeError):
    def __init__(self, degree, size, cap):
        self.degree, self.size, self.cap = degree, size, cap
        super().__init__(
            f"basis size {size} exceeds cap {cap} by degree {degree}; raise --cap to continue")


@dataclass
class DegreeSlice:
    degree: int
    basis: list
    target_basis: list
    columns: list  # d(basis[j]) as sparse vectors over target_basis

    @property
    def d_matrix(self) -> list:
        return transpose(self.columns, len(self.target_basis))


def degree_slice(model: SullivanModel, n: int) -> DegreeSlice:
    table = model.table
    src = table.basis(n)
    tgt = table.basis(n + 1)
    index = {m: i for i, m in enumerate(tgt)}
    cols = []
    for m in src:
        img = model.d(Polynomial._raw(table, {m: Fraction(1)}))
        cols.append({index[t]: c for t, c in img.terms.items()})
    return DegreeSlice(n, src, tgt, cols)


def d_rank(model: SullivanModel, n: int) -> int:
    if n < 0:
        return 0
    return sparse_rank(degree_slice(model, n).columns)


def betti(model: SullivanModel, n: int) -> int:
    if n < 0:
        return 0
    return model.table.basis_size(n) - d_rank(model, n) - d_rank(model, n - 1)


@dataclass
class BettiTable:
    dims: list
    max_degree: int
    complete: bool
    formal_dimension: int | None = None

    @property
    def total(self) -> int:
        return sum(self.dims)

    def __getitem__(self, n):
        return self.dims[n] if 0 <= n < len(self.dims) else 0

    def nonzero(self) -> dict:
        return {n: b for n, b in enumerate(self.dims) if b}

    def lines(self) -> list:
        out = [f"betti[{n}] = {b}" for n, b in enumerate(self.dims) if b]
        out.append(f"total = {self.total}")
        out.append(f"complete = {str(self.complete).lower()}")
        return out


def check_cap(model: SullivanModel, max_degree: int, cap: int) -> None:
    total = 0
    for n in range(max_degree + 2):
        total += model.table.basis_size(n)
        if total > cap:
            raise ResourceCapError(n, total, cap)


def betti_table(model: SullivanModel, max_degree: int | None = None, *, elliptic=None,
                cap: int = DEFAULT_CAP) -> BettiTable:
    """Betti numbers b_0..b_N.

    With an ellipticity report and no explicit N, N defaults to the formal
    dimension and the table is marked complete.
    """
    fd = formal_dimension(model, elliptic) if getattr(elliptic, "elliptic", False) else None
    if max_degree is None:
        if fd is None:
            raise ContractError("max_degree is required without ellipticity evidence")
        max_degree = fd
    check_cap(model, max_degree, cap)
    ranks = [d_rank(model, n) for n in range(max_degree + 1)]
    dims = []
    for n in range(max_degree + 1):
        below = ranks[n - 1] if n else 0
        dims.append(model.table.basis_size(n) - ranks[n] - below)
    return BettiTable(dims, max_degree, fd is not None and max_degree >= fd, fd)


@dataclass
class CohomologyClass:
    degree: int
    representative: Polynomial
    index: int


class CohomologyBasis:
    """Deterministic basis of H^n with coordinate read-off for cocycles.

    Cocycles are reduced against the boundaries in canonical monomial
    order; the surviving remainders are the class representatives.
    """

    def __init__(self, model: SullivanModel, n: int):
        self.model = model
        self.degree = n
        table = model.table
        sl = degree_slice(model, n)
        self.basis = sl.basis
        self.index = {m: i for i, m in enumerate(sl.basis)}
        ech = TaggedEchelon()
        if n > 0:
            for col in degree_slice(model, n - 1).columns:
                ech.insert(col, {})
        cocycles = nullspace(sl.d_matrix, len(sl.basis))
        reps = []
        for z in cocycles:
            rem, _ = ech.reduce(z)
            if rem:
                k = len(reps)
                ech.insert(rem, {k: Fraction(1)})
                reps.append(rem)
        self._ech = ech
        self.classes = [
            CohomologyClass(n, Polynomial._raw(table, {self.basis[i]: c for i, c in r.items()}), k)
            for k, r in enumerate(reps)
        ]

    def __len__(self):
        return len(self.classes)

    def vector(self, p: Polynomial) -> dict:
        return {self.index[m]: c for m, c in p.terms.items()}

    def coordinates(self, p: Polynomial) -> list:
        """Coordinates of the class of cocycle p in this basis."""
        if p and p.degree() != self.degree:
            raise ValueError(f"expected a degree-{self.degree} cocycle")
        if self.model.d(p):
            raise ValueError("not a cocycle")
        rem, tag = self._ech.reduce(self.vector(p))
        if rem:
            raise ValueError("cocycle not in the span of boundaries and classes")
        return [tag.get(k, Fraction(0)) for k in range(len(self.classes))]


def commutation_failures(model: SullivanModel, theta: Derivation) -> list:
    """Generators where d(theta g) - (-1)^|theta| theta(d g) is nonzero."""
    sign = -1 if theta.degree & 1 else 1
    bad = []
    for g in model.table:
        lhs = model.d(theta.on(g.id))
        rhs = apply_derivation(theta, model.d_gen(g.id))
        diff = lhs - rhs.scale(sign)
        if diff:
            bad.append((g.name, diff))
    return bad


@dataclass
class InducedMap:
    degree: int
    matrices: dict  # source degree -> list of rows (target coords x source coords)
    betti: list
    ker: dict = field(default_factory=dict)
    coker: dict = field(default_factory=dict)

    @property
    def total_ker(self) -> int:
        return sum(self.ker.values())

    @property
    def total_coker(self) -> int:
        return sum(self.coker.values())

    def rank_at(self, n) -> int:
        mat = self.matrices.get(n)
        if not mat:
            return 0
        return len(rref([{j: x for j, x in enumerate(r) if x} for r in mat])[0])

    def squared_is_zero(self) -> bool:
        k = self.degree
        for n, A in self.matrices.items():
            B = self.matrices.get(n + k)
            if not A or not B or not A[0]:
                continue
            for i in range(len(B)):
                for j in range(len(A[0])):
                    if sum(B[i][t] * A[t][j] for t in range(len(A))):
                        return False
        return True


def induced_map_on_H(model: SullivanModel, theta: Derivation, max_degree: int,
                     *, cap: int = DEFAULT_CAP) -> InducedMap:
    """Matrix of theta* on H^0..H^N, one block per source degree."""
    bad = commutation_failures(model, theta)
    if bad:
        name, residue = bad[0]
        raise ContractError(f"derivation does not commute with d on {name}: residue {residue}")
    check_cap(model, max_degree, cap)
    bases = [CohomologyBasis(model, n) for n in range(max_degree + 1)]
    k = theta.degree
    mats = {}
    for n, hb in enumerate(bases):
        t = n + k
        if not len(hb) or not 0 <= t <= max_degree:
            continue
        tb = bases[t]
        cols = [tb.coordinates(apply_derivation(theta, c.representative)) for c in hb.classes]
        mats[n] = [[cols[j][i] for j in range(len(cols))] for i in range(len(tb))]
    dims = [len(b) for b in bases]
    out = InducedMap(k, mats, dims)
    for n in range(max_degree + 1):
        out.ker[n] = dims[n] - out.rank_at(n)
        src = n - k
        out.coker[n] = dims[n] - (out.rank_at(src) if 0 <= src <= max_degree else 0)
    return out


@dataclass
class DualityCheck:
    holds: bool
    formal_dimension: int
    violations: list

    def __bool__(self):
        return self.holds


def poincare_duality_check(model: SullivanModel, elliptic, table: BettiTable | None = None,
                           *, cap: int = DEFAULT_CAP) -> DualityCheck:
    fd = formal_dimension(model, elliptic)
    if table is None or table.max_degree < fd:
        table = betti_table(model, fd, elliptic=elliptic, cap=cap)
    bad = [(n, table[n], table[fd - n]) for n in range(fd + 1) if table[n] != table[fd - n]]
    return DualityCheck(not bad, fd, bad)

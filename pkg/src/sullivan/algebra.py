"""Free graded-commutative algebras over Q.

Monomials are modeled by sparse tuples ((g1, e1), (g2, e2), ...) sorted by
generator id.  Odd generators only ever carry exponent 1.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator, Mapping

Monomial = tuple  # tuple[tuple[int, int], ...]
UNIT: Monomial = ()


class StructureError(ValueError):
    """Raised when values over different generator tables are combined."""


@dataclass(frozen=True)
class Generator:
    id: int
    name: str
    degree: int

    @property
    def odd(self) -> bool:
        return self.degree % 2 == 1


@dataclass(frozen=True)
class GeneratorTable:
    """Ordered generator list; declaration order fixes ids 0..m-1."""

    gens: tuple = ()
    _index: dict = field(default=None, compare=False, hash=False, repr=False)

    def __post_init__(self):
        index = {}
        for i, g in enumerate(self.gens):
            if g.id != i:
                raise ValueError(f"generator ids must be dense, got {g.id} at {i}")
            if g.degree < 1:
                raise ValueError(f"generator {g.name!r} has degree {g.degree}; degrees must be >= 1")
            if g.name in index:
                raise ValueError(f"duplicate generator name {g.name!r}")
            index[g.name] = i
        object.__setattr__(self, "_index", index)

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[str, int]]) -> "GeneratorTable":
        return cls(tuple(Generator(i, n, d) for i, (n, d) in enumerate(pairs)))

    def __len__(self):
        return len(self.gens)

    def __iter__(self) -> Iterator[Generator]:
        return iter(self.gens)

    def __getitem__(self, i: int) -> Generator:
        return self.gens[i]

    def id_of(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise KeyError(f"unknown generator {name!r}") from None

    def __contains__(self, name) -> bool:
        return name in self._index

    @property
    def names(self) -> tuple:
        return tuple(g.name for g in self.gens)

    @property
    def degrees(self) -> tuple:
        return tuple(g.degree for g in self.gens)

    def is_odd(self, i: int) -> bool:
        return self.gens[i].degree % 2 == 1

    def mono_degree(self, m: Monomial) -> int:
        gens = self.gens
        return sum(gens[g].degree * e for g, e in m)

    def mono_str(self, m: Monomial) -> str:
        if not m:
            return "1"
        parts = []
        for g, e in m:
            name = self.gens[g].name
            parts.append(name if e == 1 else f"{name}^{e}")
        return "*".join(parts)

    def basis(self, n: int) -> list:
        return list(_basis(self, n))

    def basis_size(self, n: int) -> int:
        return _basis_sizes(self, n)[n]


def word_length(m: Monomial) -> int:
    return sum(e for _, e in m)


def mono_mul(table: GeneratorTable, a: Monomial, b: Monomial):
    """Return (sign, monomial) for a*b in canonical order, or (0, None)."""
    if not a:
        return 1, b
    if not b:
        return 1, a
    gens = table.gens
    # odd factors of a at index >= i
    odd_suffix = [0] * (len(a) + 1)
    for k in range(len(a) - 1, -1, -1):
        odd_suffix[k] = odd_suffix[k + 1] + (gens[a[k][0]].degree & 1)
    out = []
    swaps = 0
    i = j = 0
    while i < len(a) and j < len(b):
        ga, ea = a[i]
        gb, eb = b[j]
        if ga < gb:
            out.append(a[i])
            i += 1
        elif gb < ga:
            if gens[gb].degree & 1:
                swaps += odd_suffix[i]
            out.append(b[j])
            j += 1
        else:
            if gens[ga].degree & 1:
                return 0, None
            out.append((ga, ea + eb))
            i += 1
            j += 1
    out.extend(a[i:])
    out.extend(b[j:])
    return (-1 if swaps & 1 else 1), tuple(out)


def mono_key(m: Monomial, nvars: int) -> tuple:
    """Sort key: canonical order is descending lex on dense exponent vectors."""
    v = [0] * nvars
    for g, e in m:
        v[g] = e
    return tuple(-e for e in v)


def _gen_basis(degs, odd, n, start):
    if n == 0:
        yield ()
        return
    if start == len(degs):
        return
    d = degs[start]
    top = min(1, n // d) if odd[start] else n // d
    for e in range(top, -1, -1):
        for rest in _gen_basis(degs, odd, n - e * d, start + 1):
            yield ((start, e),) + rest if e else rest


@lru_cache(maxsize=4096)
def _basis(table: GeneratorTable, n: int) -> tuple:
    if n < 0:
        return ()
    degs = table.degrees
    odd = tuple(d % 2 == 1 for d in degs)
    return tuple(_gen_basis(degs, odd, n, 0))


@lru_cache(maxsize=256)
def _basis_sizes(table: GeneratorTable, n: int) -> tuple:
    sizes = [1] + [0] * n
    for g in table.gens:
        d = g.degree
        if g.odd:
            for k in range(n, d - 1, -1):
                sizes[k] += sizes[k - d]
        else:
            for k in range(d, n + 1):
                sizes[k] += sizes[k - d]
    return tuple(sizes)


def basis(table: GeneratorTable, n: int) -> list:
    """All monomials of total degree n in canonical order."""
    return table.basis(n)


class Polynomial:
    """Exact-rational linear combination of canonical monomials."""

    __slots__ = ("table", "terms")

    def __init__(self, table: GeneratorTable, terms: Mapping | None = None):
        self.table = table
        if terms:
            self.terms = {m: Fraction(c) for m, c in terms.items() if c != 0}
        else:
            self.terms = {}

    @classmethod
    def _raw(cls, table, terms):
        p = cls.__new__(cls)
        p.table = table
        p.terms = terms
        return p

    @classmethod
    def zero(cls, table):
        return cls._raw(table, {})

    @classmethod
    def one(cls, table):
        return cls._raw(table, {UNIT: Fraction(1)})

    @classmethod
    def constant(cls, table, c):
        return cls(table, {UNIT: c})

    @classmethod
    def gen(cls, table, g):
        i = table.id_of(g) if isinstance(g, str) else g
        return cls._raw(table, {((i, 1),): Fraction(1)})

    @classmethod
    def monomial(cls, table, m: Monomial, c=1):
        return cls(table, {m: c})

    def _check(self, other):
        if self.table is not other.table and self.table != other.table:
            raise StructureError("polynomials live over different generator tables")

    def _coerce(self, other):
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return Polynomial.constant(self.table, other)
        return NotImplemented

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Polynomial.constant(self.table, other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.table == other.table and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return Polynomial._raw(self.table, out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw(self.table, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "Polynomial":
        c = Fraction(c)
        if not c:
            return Polynomial.zero(self.table)
        return Polynomial._raw(self.table, {m: v * c for m, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        self._check(other)
        table = self.table
        out: dict = {}
        for ma, ca in self.terms.items():
            for mb, cb in other.terms.items():
                s, m = mono_mul(table, ma, mb)
                if not s:
                    continue
                v = out.get(m, 0) + (ca * cb if s > 0 else -ca * cb)
                if v:
                    out[m] = v
                else:
                    del out[m]
        return Polynomial._raw(table, out)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, k: int):
        result = Polynomial.one(self.table)
        for _ in range(k):
            result = result * self
        return result

    def degrees(self) -> set:
        return {self.table.mono_degree(m) for m in self.terms}

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    def degree(self):
        """Degree of a homogeneous nonzero polynomial, else None."""
        ds = self.degrees()
        return ds.pop() if len(ds) == 1 else None

    def sorted_terms(self) -> list:
        n = len(self.table)
        return sorted(self.terms.items(), key=lambda mc: mono_key(mc[0], n))

    def coefficient(self, m: Monomial) -> Fraction:
        return self.terms.get(m, Fraction(0))

    def involves(self, i: int) -> bool:
        return any(g == i for m in self.terms for g, _ in m)

    def support(self) -> set:
        return {g for m in self.terms for g, _ in m}

    def __str__(self):
        return format_polynomial(self)

    def __repr__(self):
        return f"Polynomial({format_polynomial(self)!r})"


def format_polynomial(p: Polynomial) -> str:
    if not p.terms:
        return "0"
    out = []
    for k, (m, c) in enumerate(p.sorted_terms()):
        neg = c < 0
        a = -c if neg else c
        if m:
            body = p.table.mono_str(m)
            if a != 1:
                body = f"{a}*{body}"
        else:
            body = str(a)
        if k == 0:
            out.append(f"-{body}" if neg else body)
        else:
            out.append(f"- {body}" if neg else f"+ {body}")
    return " ".join(out)


def normalize(table: GeneratorTable, raw: Iterable) -> Polynomial:
    """Canonicalize (coefficient, [(gen id, exponent), ...]) pairs.

    Factors may come in any order and may repeat; Koszul signs are applied
    while sorting, and odd generators appearing twice kill the term.
    """
    out: dict = {}
    for coef, factors in raw:
        coef = Fraction(coef)
        if not coef:
            continue
        sign, mono = 1, UNIT
        for g, e in factors:
            if e < 0:
                raise ValueError("negative exponents are not supported")
            if e == 0:
                continue
            if table.is_odd(g) and e > 1:
                sign = 0
                break
            s, mono = mono_mul(table, mono, ((g, e),))
            if not s:
                sign = 0
                break
            sign *= s
        if not sign:
            continue
        v = out.get(mono, 0) + (coef if sign > 0 else -coef)
        if v:
            out[mono] = v
        else:
            del out[mono]
    return Polynomial._raw(table, out)


def mul(a: Polynomial, b: Polynomial) -> Polynomial:
    return a * b

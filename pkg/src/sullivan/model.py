"""Sullivan models: generator tables plus a differential on generators."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from graphlib import CycleError, TopologicalSorter
from typing import Mapping

from .algebra import (
    UNIT,
    GeneratorTable,
    Polynomial,
    mono_mul,
    normalize,
    word_length,
)


class ParseError(ValueError):
    def __init__(self, msg, line=None, col=None):
        self.msg, self.line, self.col = msg, line, col
        where = f"line {line}, col {col}: " if line is not None else ""
        super().__init__(where + msg)


class ContractError(RuntimeError):
    """A precondition of an operation does not hold."""


@dataclass(frozen=True)
class Derivation:
    """Degree-k derivation given on generators; Koszul sign convention."""

    table: GeneratorTable
    degree: int
    values: Mapping = field(default_factory=dict)

    def on(self, i: int) -> Polynomial:
        v = self.values.get(i)
        return v if v is not None else Polynomial.zero(self.table)

    def __call__(self, p: Polynomial) -> Polynomial:
        return apply_derivation(self, p)


def apply_derivation(theta: Derivation, p: Polynomial) -> Polynomial:
    """Leibniz extension: theta(xy) = theta(x) y + (-1)^(|theta||x|) x theta(y)."""
    table = p.table
    if theta.table != table:
        raise ValueError("derivation and polynomial use different generator tables")
    gens = table.gens
    odd_theta = theta.degree & 1
    out: dict = {}
    values = theta.values
    for m, c in p.terms.items():
        prefix_deg = 0
        for k, (g, e) in enumerate(m):
            val = values.get(g)
            if val is not None and val.terms:
                sign = -1 if (odd_theta and prefix_deg & 1) else 1
                coef = c * sign * e
                before = m[:k]
                after = m[k + 1:]
                rest = ((g, e - 1),) if e > 1 else UNIT
                for vm, vc in val.terms.items():
                    s1, t = mono_mul(table, before, rest)
                    if not s1:
                        continue
                    s2, t = mono_mul(table, t, vm)
                    if not s2:
                        continue
                    s3, t = mono_mul(table, t, after)
                    if not s3:
                        continue
                    v = coef * vc
                    if s1 * s2 * s3 < 0:
                        v = -v
                    tot = out.get(t, 0) + v
                    if tot:
                        out[t] = tot
                    else:
                        del out[t]
            prefix_deg += gens[g].degree * e
    return Polynomial._raw(table, out)


@dataclass(frozen=True)
class SullivanModel:
    table: GeneratorTable
    differential: Mapping = field(default_factory=dict)
    name: str = ""
    base: tuple = ()  # names of base generators when the model is an extension total

    def __post_init__(self):
        clean = {}
        for i, v in self.differential.items():
            if v.table != self.table:
                raise ValueError("differential values must live over the model's table")
            if v.is_zero():
                continue
            degs = v.degrees()
            want = self.table[i].degree + 1
            if degs != {want}:
                got = ", ".join(str(d) for d in sorted(degs))
                raise ValueError(
                    f"inhomogeneous differential on {self.table[i].name}: "
                    f"degree {got} != {want}")
            clean[i] = v
        object.__setattr__(self, "differential", clean)

    @property
    def derivation(self) -> Derivation:
        return Derivation(self.table, 1, self.differential)

    def d(self, p: Polynomial) -> Polynomial:
        return apply_derivation(self.derivation, p)

    def d_gen(self, g) -> Polynomial:
        i = self.table.id_of(g) if isinstance(g, str) else g
        return self.differential.get(i) or Polynomial.zero(self.table)

    def gen(self, name: str) -> Polynomial:
        return Polynomial.gen(self.table, name)

    def poly(self, text: str) -> Polynomial:
        return parse_polynomial(text, self.table)

    @property
    def odd_ids(self) -> list:
        return [g.id for g in self.table if g.odd]

    @property
    def even_ids(self) -> list:
        return [g.id for g in self.table if not g.odd]

    @property
    def chi_pi(self) -> int:
        return len(self.even_ids) - len(self.odd_ids)

    def __eq__(self, other):
        if not isinstance(other, SullivanModel):
            return NotImplemented
        return self.table == other.table and self.differential == other.differential

    def __hash__(self):
        return hash(self.table)

    def __str__(self):
        return format_model(self)


@dataclass(frozen=True)
class ModelMorphism:
    """Algebra map determined by its values on source generators."""

    source: SullivanModel
    target: SullivanModel
    values: Mapping

    def __post_init__(self):
        for i, v in self.values.items():
            want = self.source.table[i].degree
            if v and v.degrees() != {want}:
                raise ValueError(f"morphism value on {self.source.table[i].name} is not of degree {want}")

    def __call__(self, p: Polynomial) -> Polynomial:
        tgt = self.target.table
        out = Polynomial.zero(tgt)
        for m, c in p.terms.items():
            img = Polynomial.constant(tgt, c)
            for g, e in m:
                v = self.values.get(g) or Polynomial.zero(tgt)
                img = img * (v ** e)
            out = out + img
        return out

    def chain_map_failures(self) -> list:
        bad = []
        for g in self.source.table:
            lhs = self(self.source.d_gen(g.id))
            rhs = self.target.d(self.values.get(g.id) or Polynomial.zero(self.target.table))
            if lhs != rhs:
                bad.append((g.name, lhs - rhs))
        return bad

    def is_chain_map(self) -> bool:
        return not self.chain_map_failures()


@dataclass
class StructureReport:
    d_squared_zero: bool
    minimal: bool
    nilpotent: bool
    witness_order: list | None
    d_squared: dict = field(default_factory=dict)   # name -> nonzero d^2 value
    linear_terms: dict = field(default_factory=dict)  # name -> offending polynomial

    def lines(self) -> list:
        order = " ".join(self.witness_order) if self.witness_order else "none"
        return [
            f"d_squared_zero = {str(self.d_squared_zero).lower()}",
            f"minimal = {str(self.minimal).lower()}",
            f"nilpotent = {str(self.nilpotent).lower()}",
            f"order = {order}",
        ]


def nilpotent_order(model: SullivanModel, ids=None):
    """Order of `ids` with d(w_i) in the subalgebra on earlier w's, or None.

    Generators outside `ids` are treated as already available.
    """
    ids = list(range(len(model.table))) if ids is None else list(ids)
    pool = set(ids)
    ts = TopologicalSorter()
    for i in ids:
        deps = model.d_gen(i).support() & pool
        if i in deps:
            return None
        ts.add(i, *sorted(deps))
    try:
        ts.prepare()
    except CycleError:
        return None
    order = []
    while ts.is_active():
        ready = sorted(ts.get_ready())
        order.extend(ready)
        ts.done(*ready)
    return order


def check_differential(model: SullivanModel) -> StructureReport:
    dd = {}
    linear = {}
    for g in model.table:
        v = model.d_gen(g.id)
        sq = model.d(v)
        if sq:
            dd[g.name] = sq
        low = {m: c for m, c in v.terms.items() if word_length(m) < 2}
        if low:
            linear[g.name] = Polynomial(model.table, low)
    order = nilpotent_order(model)
    return StructureReport(
        d_squared_zero=not dd,
        minimal=not linear,
        nilpotent=order is not None,
        witness_order=[model.table[i].name for i in order] if order is not None else None,
        d_squared=dd,
        linear_terms=linear,
    )


def formal_dimension(model: SullivanModel, elliptic) -> int:
    """Top cohomology degree of an elliptic model.

    `elliptic` must be an ellipticity report saying the model is elliptic.
    """
    if not getattr(elliptic, "elliptic", False):
        raise ContractError("formal dimension requires evidence that the model is elliptic")
    return sum(g.degree for g in model.table if g.odd) - sum(
        g.degree - 1 for g in model.table if not g.odd)


def translate(p: Polynomial, table: GeneratorTable, id_map: Mapping) -> Polynomial:
    """Re-express p over another table by renaming generator ids."""
    return normalize(table, [(c, [(id_map[g], e) for g, e in m]) for m, c in p.terms.items()])


def _fresh_name(name, taken):
    while name in taken:
        name += "'"
    return name


def tensor(a: SullivanModel, b: SullivanModel, name: str = "") -> SullivanModel:
    taken = set(a.table.names)
    pairs = [(g.name, g.degree) for g in a.table]
    b_names = []
    for g in b.table:
        n = _fresh_name(g.name, taken)
        taken.add(n)
        b_names.append(n)
        pairs.append((n, g.degree))
    table = GeneratorTable.from_pairs(pairs)
    k = len(a.table)
    amap = {i: i for i in range(k)}
    bmap = {i: k + i for i in range(len(b.table))}
    diff = {i: translate(v, table, amap) for i, v in a.differential.items()}
    diff.update({k + i: translate(v, table, bmap) for i, v in b.differential.items()})
    base = tuple(a.base) + tuple(b_names[b.table.id_of(n)] for n in b.base)
    return SullivanModel(table, diff, name or f"{a.name}*{b.name}".strip("*"), base)


def restrict_to(model: SullivanModel, keep: list, name: str = "") -> SullivanModel:
    """Sub-model on the generators `keep` (by name); terms touching others are dropped."""
    table = GeneratorTable.from_pairs((n, model.table[model.table.id_of(n)].degree) for n in keep)
    old_ids = {model.table.id_of(n): i for i, n in enumerate(keep)}
    diff = {}
    for old, new in old_ids.items():
        v = model.d_gen(old)
        terms = [(c, [(old_ids[g], e) for g, e in m]) for m, c in v.terms.items()
                 if all(g in old_ids for g, _ in m)]
        diff[new] = normalize(table, terms)
    return SullivanModel(table, diff, name or model.name)


# ---------- text format ----------

_IDENT = r"[A-Za-z_][A-Za-z0-9_']*"
_TOKEN = re.compile(rf"\s*(?:(?P<num>\d+)|(?P<id>{_IDENT})|(?P<op>[-+*/^−]))")


def _tokenize(text, line, col0):
    pos = 0
    toks = []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        mt = _TOKEN.match(text, pos)
        if not mt:
            nonspace = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise ParseError(f"unexpected character {text[nonspace]!r}", line, col0 + nonspace + 1)
        kind = mt.lastgroup
        val = mt.group(kind)
        if val == "−":
            val = "-"
        toks.append((kind, val, col0 + mt.start(kind) + 1))
        pos = mt.end()
    return toks


def parse_polynomial(text: str, table: GeneratorTable, line=None, col0=0) -> Polynomial:
    toks = _tokenize(text, line, col0)
    pos = 0

    def peek():
        return toks[pos] if pos < len(toks) else (None, None, col0 + len(text) + 1)

    raw = []
    first = True
    while pos < len(toks) or first:
        kind, val, col = peek()
        sign = 1
        if kind == "op" and val in "+-":
            sign = -1 if val == "-" else 1
            pos += 1
        elif not first:
            raise ParseError(f"expected '+' or '-', got {val!r}", line, col)
        first = False
        coef = Fraction(1)
        factors = []
        kind, val, col = peek()
        if kind == "num":
            pos += 1
            num = int(val)
            den = 1
            k2, v2, c2 = peek()
            if k2 == "op" and v2 == "/":
                pos += 1
                k3, v3, c3 = peek()
                if k3 != "num" or int(v3) == 0:
                    raise ParseError("expected nonzero denominator", line, c3)
                den = int(v3)
                pos += 1
            coef = Fraction(num, den)
            k2, v2, c2 = peek()
            if k2 == "op" and v2 == "*":
                pos += 1
                kind, val, col = peek()
                if kind != "id":
                    raise ParseError("expected generator after '*'", line, col)
            elif k2 == "id":
                kind, val, col = k2, v2, c2
            else:
                raw.append((sign * coef, factors))
                continue
        elif kind != "id":
            raise ParseError(f"expected term, got {val!r}" if val else "expected term", line, col)
        while True:
            kind, val, col = peek()
            if kind != "id":
                raise ParseError("expected generator name", line, col)
            if val not in table:
                raise ParseError(f"unknown generator {val!r}", line, col)
            pos += 1
            exp = 1
            k2, v2, c2 = peek()
            if k2 == "op" and v2 == "^":
                pos += 1
                k3, v3, c3 = peek()
                if k3 != "num":
                    raise ParseError("expected exponent", line, c3)
                exp = int(v3)
                pos += 1
            factors.append((table.id_of(val), exp))
            k2, v2, c2 = peek()
            if k2 == "op" and v2 == "*":
                pos += 1
                continue
            break
        raw.append((sign * coef, factors))
    return normalize(table, raw)


_GEN_RE = re.compile(rf"^(gen|base)\s+({_IDENT})\s*:\s*(-?\d+)\s*$")
_D_RE = re.compile(rf"^d\s+({_IDENT})\s*=(.*)$")
_MODEL_RE = re.compile(r"^model\s+(\S+)\s*$")


def _statements(text):
    for ln, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0]
        col = 0
        for part in line.split(";"):
            stripped = part.strip()
            if stripped:
                yield ln, col + len(part) - len(part.lstrip()), stripped
            col += len(part) + 1


def parse_model(text: str, name: str = "") -> SullivanModel:
    decls = []
    dlines = []
    base = []
    for ln, col, stmt in _statements(text):
        if m := _MODEL_RE.match(stmt):
            name = m.group(1)
        elif m := _GEN_RE.match(stmt):
            kind, ident, deg = m.group(1), m.group(2), int(m.group(3))
            if deg <= 0:
                raise ParseError(f"generator {ident!r} has degree {deg}; degrees must be >= 1", ln, col + 1)
            if any(ident == d[0] for d in decls):
                raise ParseError(f"duplicate generator name {ident!r}", ln, col + 1)
            decls.append((ident, deg))
            if kind == "base":
                base.append(ident)
        elif m := _D_RE.match(stmt):
            dlines.append((ln, col, m.group(1), m.group(2), stmt.index("=") + 1))
        else:
            raise ParseError(f"cannot parse statement {stmt!r}", ln, col + 1)
    table = GeneratorTable.from_pairs(decls)
    diff = {}
    for ln, col, ident, body, off in dlines:
        if ident not in table:
            raise ParseError(f"differential of undeclared generator {ident!r}", ln, col + 1)
        i = table.id_of(ident)
        if i in diff:
            raise ParseError(f"second differential for {ident!r}", ln, col + 1)
        p = parse_polynomial(body, table, ln, col + off)
        want = table[i].degree + 1
        bad = sorted(p.degrees() - {want})
        if bad:
            raise ParseError(
                f"inhomogeneous differential for {ident!r}: degree {bad[0]} != {want}", ln, col + 1)
        diff[i] = p
    return SullivanModel(table, diff, name, tuple(base))


def format_model(model: SullivanModel) -> str:
    lines = []
    if model.name:
        lines.append(f"model {model.name}")
    base = set(model.base)
    for g in model.table:
        kw = "base" if g.name in base else "gen"
        lines.append(f"{kw} {g.name} : {g.degree}")
    for g in model.table:
        v = model.differential.get(g.id)
        if v:
            lines.append(f"d {g.name} = {v}")
    return "\n".join(lines) + "\n"


def load_model(path) -> SullivanModel:
    with open(path, encoding="utf-8") as fh:
        return parse_model(fh.read())

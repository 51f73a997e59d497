"""Associated pure models and the ellipticity decision procedure.

A finite model has finite-dimensional cohomology iff its associated pure
model does, and a pure model does iff Q[W^even] / (d_sigma W^odd) is
finite-dimensional.  The latter is read off a Groebner basis.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .algebra import Polynomial
from .groebner import GroebnerBasis, format_commutative, groebner, poly_mul, wdeg
from .linalg import rref
from .model import SullivanModel


class PurityError(RuntimeError):
    pass


def _even_only(p: Polynomial) -> Polynomial:
    table = p.table
    return Polynomial._raw(table, {m: c for m, c in p.terms.items()
                                   if all(not table.is_odd(g) for g, _ in m)})


def associated_pure(model: SullivanModel) -> SullivanModel:
    """d_sigma: zero on even generators, the Lambda(W^even) part of d on odd ones."""
    diff = {}
    for i in model.odd_ids:
        v = _even_only(model.d_gen(i))
        if v:
            diff[i] = v
    pure = SullivanModel(model.table, diff, model.name, model.base)
    for i in pure.odd_ids:
        if pure.d(pure.d_gen(i)):
            raise PurityError(f"d_sigma^2 != 0 on {model.table[i].name}")
    return pure


def is_pure(model: SullivanModel) -> bool:
    return all(not model.d_gen(i) for i in model.even_ids) and all(
        _even_only(model.d_gen(i)) == model.d_gen(i) for i in model.odd_ids)


@dataclass
class PolynomialIdeal:
    """Ideal in the commutative ring Q[W^even] with weighted grading."""

    variables: tuple
    weights: tuple
    generators: list  # dicts {exponent tuple: Fraction}

    def format(self) -> list:
        return [format_commutative(g, self.variables, self.weights) for g in self.generators]


def pure_ideal(model: SullivanModel) -> PolynomialIdeal:
    table = model.table
    evens = model.even_ids
    pos = {g: k for k, g in enumerate(evens)}
    gens = []
    for i in model.odd_ids:
        v = _even_only(model.d_gen(i))
        if not v:
            continue
        poly = {}
        for m, c in v.terms.items():
            e = [0] * len(evens)
            for g, a in m:
                e[pos[g]] = a
            poly[tuple(e)] = c
        gens.append(poly)
    return PolynomialIdeal(tuple(table[g].name for g in evens),
                           tuple(table[g].degree for g in evens), gens)


def membership_certificate(ideal: PolynomialIdeal, target: dict):
    """Cofactors c_i with sum c_i f_i = target, found by a homogeneous linear solve.

    Works degree-wise, so it is independent of any Groebner computation.
    Returns None when target is not in the ideal.
    """
    weights = ideal.weights
    degs = {wdeg(e, weights) for e in target}
    if len(degs) != 1:
        raise ValueError("target must be weighted-homogeneous")
    D = degs.pop()
    unknowns = []  # (generator index, cofactor monomial)
    for k, f in enumerate(ideal.generators):
        fd = wdeg(next(iter(f)), weights)
        for e in _weighted_monomials(weights, D - fd):
            unknowns.append((k, e))
    images = [poly_mul({e: Fraction(1)}, ideal.generators[k]) for k, e in unknowns]
    monos = sorted({e for im in images for e in im} | set(target))
    n = len(unknowns)
    # augmented rows: sum_j x_j image_j[e] = target[e]
    rows = []
    for e in monos:
        r = {j: im[e] for j, im in enumerate(images) if e in im}
        t = target.get(e)
        if t:
            r[n] = Fraction(t)
        rows.append(r)
    red, piv = rref(rows)
    if n in piv:
        return None
    x = [Fraction(0)] * n
    for row, c in zip(red, piv):
        x[c] = row.get(n, Fraction(0))
    cof = [dict() for _ in ideal.generators]
    for (k, e), v in zip(unknowns, x):
        if v:
            cof[k][e] = v
    return cof


def _weighted_monomials(weights, D):
    if D < 0:
        return
    if not weights:
        if D == 0:
            yield ()
        return
    w = weights[0]
    for a in range(D // w, -1, -1):
        for rest in _weighted_monomials(weights[1:], D - a * w):
            yield (a,) + rest


@dataclass
class Witness:
    variable: str
    exponent: int
    cofactors: list  # per ideal generator

    def format(self, ideal: PolynomialIdeal) -> str:
        parts = []
        for c, f in zip(self.cofactors, ideal.generators):
            if c:
                parts.append(f"({format_commutative(c, ideal.variables, ideal.weights)})"
                             f"*({format_commutative(f, ideal.variables, ideal.weights)})")
        rhs = " + ".join(parts) if parts else "0"
        return f"{self.variable}^{self.exponent} = {rhs}"


@dataclass
class EllipticityReport:
    elliptic: bool
    quotient_dimension: int | None  # None means infinite
    groebner_basis: GroebnerBasis
    ideal: PolynomialIdeal
    witness: dict = field(default_factory=dict)  # variable name -> Witness

    def lines(self) -> list:
        q = "inf" if self.quotient_dimension is None else str(self.quotient_dimension)
        out = [f"elliptic = {str(self.elliptic).lower()}", f"quotient_dim = {q}"]
        for v, w in self.witness.items():
            out.append(f"witness[{v}] = {v}^{w.exponent}")
        return out


def pure_power_witnesses(ideal: PolynomialIdeal, gb: GroebnerBasis) -> dict:
    """For each variable x, the least k with x^k in the ideal, with cofactors."""
    out = {}
    nv = len(ideal.variables)
    for i, name in enumerate(ideal.variables):
        k = 1
        while True:
            e = tuple(k if j == i else 0 for j in range(nv))
            if gb.contains({e: Fraction(1)}):
                break
            k += 1
        cof = membership_certificate(ideal, {e: Fraction(1)})
        if cof is None:
            raise PurityError(f"Groebner reduction and linear solve disagree on {name}^{k}")
        out[name] = Witness(name, k, cof)
    return out


def is_zero_dimensional(gb: GroebnerBasis) -> bool:
    return gb.is_zero_dimensional()


def is_elliptic(model: SullivanModel, *, witnesses: bool = True) -> EllipticityReport:
    pure = associated_pure(model)
    ideal = pure_ideal(pure)
    gb = groebner(ideal.generators, ideal.variables, ideal.weights)
    qdim = gb.quotient_dimension()
    elliptic = qdim is not None
    wit = pure_power_witnesses(ideal, gb) if elliptic and witnesses else {}
    return EllipticityReport(elliptic, qdim, gb, ideal, wit)

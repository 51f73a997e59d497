"""Buchberger's algorithm over Q in a weighted polynomial ring.

Polynomials are dicts {exponent tuple: Fraction}.  The monomial order is
graded reverse lexicographic with respect to the variable weights, ties
broken by declaration index (the last variable is the smallest).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product


def wdeg(e, weights) -> int:
    return sum(a * w for a, w in zip(e, weights))


def order_key(e, weights):
    return (wdeg(e, weights), tuple(-a for a in reversed(e)))


def leading(p: dict, weights):
    return max(p, key=lambda e: order_key(e, weights))


def divides(a, b) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _lcm(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


def _sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def _add_scaled(p: dict, c: Fraction, shift, q: dict) -> None:
    """p += c * x^shift * q in place."""
    for e, v in q.items():
        t = tuple(x + y for x, y in zip(e, shift))
        s = p.get(t, 0) + c * v
        if s:
            p[t] = s
        else:
            p.pop(t, None)


def poly_mul(p: dict, q: dict) -> dict:
    out: dict = {}
    for e, c in p.items():
        _add_scaled(out, c, e, q)
    return out


def monic(p: dict, weights) -> dict:
    c = p[leading(p, weights)]
    return {e: v / c for e, v in p.items()}


def normal_form(p: dict, G: list, weights) -> dict:
    """Full reduction of p modulo G."""
    p = {e: Fraction(c) for e, c in p.items() if c}
    rem: dict = {}
    lts = [(leading(g, weights), g) for g in G]
    while p:
        lt = leading(p, weights)
        c = p[lt]
        for lg, g in lts:
            if divides(lg, lt):
                _add_scaled(p, -c / g[lg], _sub(lt, lg), g)
                break
        else:
            rem[lt] = c
            del p[lt]
    return rem


def s_polynomial(f: dict, g: dict, weights) -> dict:
    lf, lg = leading(f, weights), leading(g, weights)
    L = _lcm(lf, lg)
    out: dict = {}
    _add_scaled(out, 1 / f[lf], _sub(L, lf), f)
    _add_scaled(out, -1 / g[lg], _sub(L, lg), g)
    return out


def buchberger(F: list, weights) -> list:
    """Reduced Groebner basis, monic, sorted by leading monomial (descending)."""
    G = [monic(f, weights) for f in F if f]
    if not G:
        return []
    pairs = set(combinations(range(len(G)), 2))
    while pairs:
        i, j = min(pairs, key=lambda ij: (
            order_key(_lcm(leading(G[ij[0]], weights), leading(G[ij[1]], weights)), weights), ij))
        pairs.discard((i, j))
        li, lj = leading(G[i], weights), leading(G[j], weights)
        L = _lcm(li, lj)
        # first criterion: coprime leading monomials
        if all(a == 0 or b == 0 for a, b in zip(li, lj)):
            continue
        # second (chain) criterion
        if any(k not in (i, j) and divides(leading(G[k], weights), L)
               and tuple(sorted((i, k))) not in pairs and tuple(sorted((j, k))) not in pairs
               for k in range(len(G))):
            continue
        h = normal_form(s_polynomial(G[i], G[j], weights), G, weights)
        if h:
            G.append(monic(h, weights))
            n = len(G) - 1
            pairs.update((k, n) for k in range(n))
    return reduce_basis(G, weights)


def reduce_basis(G: list, weights) -> list:
    G = [g for g in G if g]
    # drop elements whose leading monomial is divisible by another's
    keep = []
    lts = [leading(g, weights) for g in G]
    for i, g in enumerate(G):
        if any(j != i and divides(lts[j], lts[i]) and (lts[j] != lts[i] or j < i)
               for j in range(len(G))):
            continue
        keep.append(g)
    out = []
    for i, g in enumerate(keep):
        others = keep[:i] + keep[i + 1:]
        lt = leading(g, weights)
        tail = {e: c for e, c in g.items() if e != lt}
        red = normal_form(tail, others, weights)
        red[lt] = g[lt]
        out.append(monic(red, weights))
    out.sort(key=lambda g: order_key(leading(g, weights), weights), reverse=True)
    return out


@dataclass
class GroebnerBasis:
    variables: tuple
    weights: tuple
    polys: list

    @property
    def leading_monomials(self) -> list:
        return [leading(g, self.weights) for g in self.polys]

    def reduce(self, p: dict) -> dict:
        return normal_form(p, self.polys, self.weights)

    def contains(self, p: dict) -> bool:
        return not self.reduce(p)

    def pure_powers(self) -> dict:
        """variable index -> smallest exponent k with x^k a leading monomial."""
        out = {}
        for lt in self.leading_monomials:
            nz = [i for i, a in enumerate(lt) if a]
            if len(nz) == 1:
                i = nz[0]
                out[i] = min(out.get(i, lt[i]), lt[i])
        return out

    def is_zero_dimensional(self) -> bool:
        if any(not lt or not any(lt) for lt in self.leading_monomials):
            return True  # unit ideal
        return len(self.pure_powers()) == len(self.variables)

    def standard_monomials(self) -> list | None:
        """Monomials outside the leading-term ideal, or None if infinitely many."""
        if not self.is_zero_dimensional():
            return None
        lts = self.leading_monomials
        if any(not any(lt) for lt in lts):
            return []
        bounds = self.pure_powers()
        ranges = [range(bounds[i]) for i in range(len(self.variables))]
        return [e for e in product(*ranges) if not any(divides(lt, e) for lt in lts)]

    def quotient_dimension(self):
        std = self.standard_monomials()
        return None if std is None else len(std)

    def format_poly(self, p: dict) -> str:
        return format_commutative(p, self.variables, self.weights)


def groebner(generators: list, variables, weights) -> GroebnerBasis:
    return GroebnerBasis(tuple(variables), tuple(weights), buchberger(generators, weights))


def format_commutative(p: dict, variables, weights=None) -> str:
    if not p:
        return "0"
    if weights is None:
        weights = (1,) * len(variables)
    parts = []
    for k, e in enumerate(sorted(p, key=lambda e: order_key(e, weights), reverse=True)):
        c = p[e]
        mono = "*".join(v if a == 1 else f"{v}^{a}" for v, a in zip(variables, e) if a)
        a = abs(c)
        body = (mono if a == 1 else f"{a}*{mono}") if mono else str(a)
        if k == 0:
            parts.append(("-" if c < 0 else "") + body)
        else:
            parts.append(("- " if c < 0 else "+ ") + body)
    return " ".join(parts)

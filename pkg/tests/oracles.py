"""Reference computations that share no code with the package.

Used to freeze expected values: dense elimination over an exterior
algebra encoded as bitmasks, a generating-function basis count, and a
Groebner quotient count through sympy.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product


# ---------- exterior algebra on odd generators, monomials as bitmasks ----------

def _sign_merge(a: int, b: int) -> int:
    """Sign of reordering (generators of a)(generators of b) into ascending order."""
    swaps = 0
    bits = b
    while bits:
        low = bits & -bits
        # generators of a strictly above this generator of b must be passed
        swaps += bin(a & ~((low << 1) - 1)).count("1")
        bits ^= low
    return -1 if swaps & 1 else 1


def exterior_d(dgens: dict, mask: int, n: int) -> dict:
    """d of a monomial mask; dgens maps generator index -> {mask: coefficient}."""
    out: dict = {}
    for i in range(n):
        if not mask >> i & 1 or i not in dgens:
            continue
        before = mask & ((1 << i) - 1)
        after = mask & ~((1 << (i + 1)) - 1)
        sign_i = -1 if bin(before).count("1") & 1 else 1
        for m, c in dgens[i].items():
            # before * (dg_i) * after, dg_i has even degree
            if m & before or m & after:
                continue
            s = _sign_merge(before, m)
            merged = before | m
            s *= _sign_merge(merged, after)
            key = merged | after
            out[key] = out.get(key, 0) + sign_i * s * c
    return {k: v for k, v in out.items() if v}


def dense_rank(rows: list) -> int:
    rows = [[Fraction(x) for x in r] for r in rows]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for col in range(ncols):
        piv = next((i for i in range(rank, len(rows)) if rows[i][col]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        for i in range(len(rows)):
            if i != rank and rows[i][col]:
                f = rows[i][col] / rows[rank][col]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[rank])]
        rank += 1
    return rank


def exterior_betti(degrees: list, dgens: dict) -> dict:
    """Betti numbers of (Lambda(odd generators), d) by dense elimination per degree."""
    n = len(degrees)
    by_deg: dict = {}
    for mask in range(1 << n):
        deg = sum(degrees[i] for i in range(n) if mask >> i & 1)
        by_deg.setdefault(deg, []).append(mask)
    ranks = {}
    for deg, masks in by_deg.items():
        tgt = by_deg.get(deg + 1, [])
        index = {m: k for k, m in enumerate(tgt)}
        rows = [[0] * len(masks) for _ in tgt]
        for j, m in enumerate(masks):
            for t, c in exterior_d(dgens, m, n).items():
                rows[index[t]][j] = c
        ranks[deg] = dense_rank(rows) if tgt and masks else 0
    return {deg: len(masks) - ranks[deg] - ranks.get(deg - 1, 0)
            for deg, masks in by_deg.items()
            if len(masks) - ranks[deg] - ranks.get(deg - 1, 0)}


def odd_free_data(n: int):
    """Degrees and differential of the family Lambda(u_i:3, v_ij:5; d v_ij = u_i u_j)."""
    degrees = [3] * n
    dgens = {}
    for i in range(n):
        for j in range(i + 1, n):
            dgens[len(degrees)] = {(1 << i) | (1 << j): 1}
            degrees.append(5)
    return degrees, dgens


# ---------- generating function for basis sizes ----------

def series_basis_sizes(degrees: list, top: int) -> list:
    coeffs = [1] + [0] * top
    for d in degrees:
        if d % 2:
            coeffs = [coeffs[k] + (coeffs[k - d] if k >= d else 0) for k in range(top + 1)]
        else:
            new = coeffs[:]
            for k in range(d, top + 1):
                new[k] += new[k - d]
            coeffs = new
    return coeffs


# ---------- Groebner quotient through sympy ----------

def sympy_quotient_dimension(gens_text: list, variables: list):
    import sympy

    syms = sympy.symbols(variables)
    polys = [sympy.sympify(t, locals=dict(zip(variables, syms))) for t in gens_text]
    G = sympy.groebner(polys, *syms, order="grevlex")
    if list(G.exprs) == [1]:
        return 0
    lts = [sympy.Poly(g, *syms).monoms(order="grevlex")[0] for g in G.exprs]
    bounds = []
    for i in range(len(syms)):
        pure = [lt[i] for lt in lts if all(e == 0 for k, e in enumerate(lt) if k != i) and lt[i]]
        if not pure:
            return None
        bounds.append(min(pure))
    count = 0
    for e in product(*(range(b) for b in bounds)):
        if not any(all(x >= y for x, y in zip(e, lt)) for lt in lts):
            count += 1
    return count

"""Seeded random odd-only quadratic two-stage models for property tests."""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations

from .algebra import GeneratorTable, Polynomial
from .linalg import rank
from .model import SullivanModel


class InadmissibleParams(ValueError):
    pass


def _stacked_rank(blocks, p) -> int:
    rows = [{j: Fraction(x) for j, x in enumerate(row) if x} for M in blocks for row in M]
    return rank(rows) if rows else 0


def _skew(p, entries) -> list:
    M = [[0] * p for _ in range(p)]
    for (i, j), a in zip(combinations(range(p), 2), entries):
        M[i][j], M[j][i] = a, -a
    return M


def random_two_stage(seed: int, p: int, r: int, degrees=(3, 3), *, full_rank: bool = True,
                     coefficients=(-2, -1, 0, 1, 2), max_tries: int = 10_000) -> SullivanModel:
    """Odd-only model Lambda(u_1..u_p, v_1..v_r), d v_k = sum_{i<j} M^k_ij u_i u_j.

    The r skew matrices M^k are linearly independent; with `full_rank` their
    stacking has rank p, which makes V maximal.  All U generators share one
    odd degree drawn from `degrees` (an inclusive range), and |v_k| = 2|u| - 1.
    """
    pairs = p * (p - 1) // 2
    if p < 0 or r < 0 or r > pairs:
        raise InadmissibleParams(f"need 0 <= r <= C(p,2) = {pairs}, got p={p}, r={r}")
    if full_rank and p and not r:
        raise InadmissibleParams("stacked rank p needs r >= 1")
    if full_rank and r == 1 and p % 2:
        # a single skew-symmetric matrix has even rank
        raise InadmissibleParams(f"stacked rank {p} is odd; one skew matrix cannot reach it")
    lo, hi = degrees
    odd_degrees = [d for d in range(lo, hi + 1) if d % 2 == 1 and d >= 1]
    if not odd_degrees:
        raise InadmissibleParams(f"no odd degree in [{lo}, {hi}]")
    rng = random.Random(seed)
    du = rng.choice(odd_degrees)
    nonzero = [c for c in coefficients if c]
    for _ in range(max_tries):
        vecs = [[rng.choice(coefficients) for _ in range(pairs)] for _ in range(r)]
        for v in vecs:
            if not any(v):
                v[rng.randrange(pairs)] = rng.choice(nonzero)
        if rank([{j: Fraction(x) for j, x in enumerate(v) if x} for v in vecs]) < r:
            continue
        blocks = [_skew(p, v) for v in vecs]
        if full_rank and _stacked_rank(blocks, p) < p:
            continue
        break
    else:
        raise InadmissibleParams(f"no admissible sample after {max_tries} tries")
    pairs_list = list(combinations(range(p), 2))
    table = GeneratorTable.from_pairs(
        [(f"u{i + 1}", du) for i in range(p)] + [(f"v{k + 1}", 2 * du - 1) for k in range(r)])
    diff = {}
    for k, v in enumerate(vecs):
        poly = Polynomial.zero(table)
        for (i, j), a in zip(pairs_list, v):
            if a:
                poly = poly + (Polynomial.gen(table, i) * Polynomial.gen(table, j)).scale(a)
        diff[p + k] = poly
    return SullivanModel(table, diff, f"random-{seed}-p{p}-r{r}")

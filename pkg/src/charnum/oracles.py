r"""Independent verifiers: brute-force Hurwitz counts, table diffing, and the
Pieri/Giambelli oracle behind the shipped Gr(2,4) ring constants.

These live in the library (not only in the tests) so `charnum verify` can
re-run them against the production paths.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from math import factorial

from .series import Rat

__all__ = [
    "FactorizationCount",
    "hurwitz_bruteforce",
    "cross_check",
    "schubert_gr24_product",
    "schubert_gr24_cup_table",
]

# ---------------------------------------------------------------------------
# Hurwitz numbers by exhaustive factorization in the symmetric group
# ---------------------------------------------------------------------------

MAX_TUPLES = 20_000_000


@dataclass(frozen=True)
class FactorizationCount:
    d: int
    b: int
    count: Rat  # (# transitive transposition tuples with identity product) / d!

    @property
    def genus(self) -> int:
        # Riemann-Hurwitz: b = 2d + 2g - 2
        g2 = self.b - 2 * self.d + 2
        return g2 // 2


def _transpositions(d: int) -> list[tuple[int, ...]]:
    """Transpositions of {0..d-1} as permutation tuples."""
    out = []
    for i, j in combinations(range(d), 2):
        p = list(range(d))
        p[i], p[j] = p[j], p[i]
        out.append(tuple(p))
    return out


def _is_transitive(transpositions_used: list[tuple[int, int]], d: int) -> bool:
    parent = list(range(d))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i, j in transpositions_used:
        parent[find(i)] = find(j)
    return len({find(x) for x in range(d)}) == 1


def hurwitz_bruteforce(d: int, b: int) -> FactorizationCount:
    """Count tuples of b transpositions in S_d with identity product and
    transitive generated action, weighted by 1/d!.

    Desk scale only: d <= 5, b <= 10, and the raw tuple count must stay small.
    """
    if d < 1 or b < 0:
        raise ValueError("need d >= 1 and b >= 0")
    if d > 5 or b > 10:
        raise ValueError(f"size limit exceeded: d={d}, b={b} (desk scale is d <= 5, b <= 10)")
    if d == 1:
        return FactorizationCount(1, b, Fraction(1 if b == 0 else 0))
    pairs = list(combinations(range(d), 2))
    if len(pairs) ** b > MAX_TUPLES:
        raise ValueError(f"size limit exceeded: {len(pairs)}^{b} tuples")
    perms = _transpositions(d)
    identity = tuple(range(d))
    count = 0
    for chosen in product(range(len(pairs)), repeat=b):
        sigma = identity
        for idx in chosen:
            t = perms[idx]
            sigma = tuple(t[x] for x in sigma)
        if sigma != identity:
            continue
        if _is_transitive([pairs[i] for i in chosen], d):
            count += 1
    return FactorizationCount(d, b, Fraction(count, factorial(d)))


# ---------------------------------------------------------------------------
# Entry-wise comparison of two result tables
# ---------------------------------------------------------------------------


def cross_check(path_a: dict, path_b: dict) -> list[tuple]:
    """Entry-wise diff of two mappings; empty list means the paths agree.

    Returns (key, value_a, value_b) triples, absent entries read as 0.
    """
    zero = Fraction(0)
    report = []
    for key in sorted(set(path_a) | set(path_b)):
        va = path_a.get(key, zero)
        vb = path_b.get(key, zero)
        if va != vb:
            report.append((key, va, vb))
    return report


# ---------------------------------------------------------------------------
# Schubert calculus on the Grassmannian of lines in P^3
# ---------------------------------------------------------------------------

_BOX = (2, 2)
GR24_PARTITIONS = ((0, 0), (1, 0), (2, 0), (1, 1), (2, 1), (2, 2))


def _pieri(a: int, lam: tuple[int, int]) -> dict[tuple[int, int], int]:
    """sigma_a * sigma_lam: horizontal strips inside the 2x2 box."""
    if a == 0:
        return {lam: 1}
    if a > _BOX[0]:
        return {}
    out: dict[tuple[int, int], int] = {}
    l1, l2 = lam
    for m1 in range(l1, _BOX[0] + 1):
        for m2 in range(l2, min(l1, _BOX[1]) + 1):
            if (m1 - l1) + (m2 - l2) == a and m1 >= m2:
                out[(m1, m2)] = out.get((m1, m2), 0) + 1
    return out


def _pieri_poly(a: int, poly: dict) -> dict:
    out: dict[tuple[int, int], int] = {}
    for lam, c in poly.items():
        for nu, k in _pieri(a, lam).items():
            out[nu] = out.get(nu, 0) + c * k
    return {k: v for k, v in out.items() if v}


def schubert_gr24_product(lam: tuple[int, int], mu: tuple[int, int]) -> dict[tuple[int, int], int]:
    """sigma_lam * sigma_mu in H*(Gr(2,4)).

    Giambelli reduces to special classes: s_{l1,l2} = s_{l1} s_{l2} - s_{l1+1} s_{l2-1}.
    """
    l1, l2 = lam
    if l2 == 0:
        return _pieri(l1, mu)
    out = _pieri_poly(l1, _pieri_poly(l2, {mu: 1}))
    for k, v in _pieri_poly(l1 + 1, _pieri_poly(l2 - 1, {mu: 1})).items():
        out[k] = out.get(k, 0) - v
    return {k: v for k, v in out.items() if v}


def schubert_gr24_cup_table() -> dict[tuple[int, int], tuple[int, ...]]:
    """All structure-constant vectors, indexed like the shipped gr24 built-in."""
    idx = {p: i for i, p in enumerate(GR24_PARTITIONS)}
    table = {}
    for i, li in enumerate(GR24_PARTITIONS):
        for j, lj in enumerate(GR24_PARTITIONS):
            vec = [0] * 6
            for nu, c in schubert_gr24_product(li, lj).items():
                vec[idx[nu]] = c
            table[(i, j)] = tuple(vec)
    return table

r"""Characteristic numbers of plane curves (genus 0, 1, 2).

N^g_d(a,b,c) counts irreducible degree-d genus-g plane curves through a
general points, tangent to b general lines, and tangent to c general lines at
a specified point (flag conditions); it is zero unless a + b + 2c = 3d+g-1.
The potential

    G^g(s,u,v,w) = sum_{d>0} exp(ds) sum u^a/a! v^b/b! w^c/c! N^g_d(a,b,c)

is computed per genus:

* genus 0: tangency and flag conditions are removed one at a time:

    G_vs  = G_us - G_u + (1/2)(G_ss . L G_s + G_us . P G_s)
    G_wss = G_uu + (G_us . L G_ss + G_uu . P G_ss)

  with the line and point operators L = d/ds + 2v d/du and
  P = 2v d/ds + (2v^2 + 2w) d/du, seeded by the point-only Gromov-Witten
  numbers.  Virtual equals enumerative in genus 0.

* genus 1: the same shape of equations holds for the double-cover-inclusive
  potential (G^1 + E), with 1/24-correction blocks; E, the generating
  polynomial of elliptic double covers of a line, is subtracted at reporting
  time.  An independent route goes through the genus-1 tangency potential and
  the correction formula  virtual = G^1 - (1/24) P G^0 + E.

* genus 2: only the correction layer: for d >= 4,

    G^2 = virtual + (1/24) P G^1 - (1/2)((1/24) P)^2 G^0
          - (H_s . L G^0 + H_u . P G^0),

  where H counts genus-2 double covers of a line and the virtual numbers are
  ingested seed data.  Degrees d <= 3 carry further degenerate-cover terms
  that are not evaluated here and are rejected.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb, factorial

from .descend import (
    DescendantSpec,
    TangencySpace,
    genus0_tangency_potential,
    genus1_tangency_potential,
)
from .geometry import TargetGeometry
from .gw import GWTable
from .series import DiffOperator, Rat, SeriesTable, VarSpace

__all__ = [
    "P2_SPACE",
    "line_operator",
    "point_operator",
    "cover_polynomials",
    "tangency_expand",
    "charnum_genus0",
    "charnum_genus1",
    "charnum_genus1_virtual_route",
    "charnum_genus2",
    "genus2_corrections",
    "to_char_variables",
    "dim_ok",
]

P2_SPACE = VarSpace(("s",), ("u", "v", "w"))


def line_operator() -> DiffOperator:
    return DiffOperator.build([(1, {}, "s"), (2, {"v": 1}, "u")])


def point_operator() -> DiffOperator:
    return DiffOperator.build([(2, {"v": 1}, "s"), (2, {"v": 2}, "u"), (2, {"w": 1}, "u")])


def dim_ok(genus: int, d: int, a: int, b: int, c: int) -> bool:
    return a + b + 2 * c == 3 * d + genus - 1


def _strata(genus: int, d: int):
    top = 3 * d + genus - 1
    for c in range(top // 2 + 1):
        for b in range(top - 2 * c + 1):
            yield top - b - 2 * c, b, c


def cover_polynomials() -> tuple[SeriesTable, SeriesTable]:
    """E and H: elliptic resp. genus-2 double covers of a line, degree 2.

    Both are (1/2) e^{2s} times six monomial terms; incidence conditions come
    with a factor 2 (two choices of mark), the leading 1/2 cancels the
    double marking / the deck transformation.
    """

    def build(terms) -> SeriesTable:
        entries = {}
        for a, b, c, coef in terms:
            # stored invariant = (1/2) * coef * a! b! c!
            entries[((2,), (a, b, c))] = Fraction(1, 2) * coef * factorial(a) * factorial(b) * factorial(c)
        return SeriesTable(P2_SPACE, 2, entries)

    e_terms = [
        (0, 6, 0, Fraction(1, 2 * (2 * 2 * 2))),
        (1, 5, 0, Fraction(2, 2 * 6)),
        (2, 4, 0, Fraction(4, 2 * 24)),
        (0, 4, 1, Fraction(1, 2 * 2)),
        (1, 3, 1, Fraction(2, 6)),
        (0, 2, 2, Fraction(1, 2 * 2)),
    ]
    h_terms = [
        (0, 8, 0, Fraction(1, 2 * (2 * 2 * 24))),
        (1, 7, 0, Fraction(2, 2 * 120)),
        (2, 6, 0, Fraction(4, 2 * 720)),
        (0, 6, 1, Fraction(1, 2 * 24)),
        (1, 5, 1, Fraction(2, 120)),
        (0, 4, 2, Fraction(1, 24 * 2)),
    ]
    return build(e_terms), build(h_terms)


def tangency_expand(a: int, b: int, c: int, d: int, genus: int = 0):
    """Expand point^a (point + tau_1(line))^b flag^c into pure descendant
    specs with binomial multiplicities (the bridge to the recursion engine)."""
    out = []
    for k in range(b + 1):
        ins = ((0, 2),) * (a + k) + ((1, 1),) * (b - k) + ((1, 2),) * c
        out.append((DescendantSpec(genus, (d,), ins), comb(b, k)))
    return out


def _quad_coeff(table: SeriesTable, d: int, key: tuple[int, int, int]) -> Rat:
    return table.coeff((d,), key)


def charnum_genus0(gw: GWTable, dmax: int) -> SeriesTable:
    """All genus-0 characteristic numbers of the plane up to degree dmax."""
    if gw.geom.name != "p2":
        raise ValueError("the plane pipeline needs the p2 geometry")
    L, P = line_operator(), point_operator()
    entries: dict = {}
    for d in range(1, dmax + 1):
        entries[((d,), (3 * d - 1, 0, 0))] = gw.lookup((d,), [2] * (3 * d - 1))
        lower = SeriesTable(P2_SPACE, dmax, {k: v for k, v in entries.items() if k[0][0] < d})
        g_s = lower.partial("s")
        g_ss = g_s.partial("s")
        qv = (g_ss * L(g_s) + g_s.partial("u") * P(g_s)).scale(Fraction(1, 2))
        qw = g_s.partial("u") * L(g_ss) + lower.partial("u").partial("u") * P(g_ss)
        for a, b, c in _strata(0, d):
            if c == 0 and b == 0:
                continue
            if c == 0:
                prev = entries.get(((d,), (a + 1, b - 1, 0)), Fraction(0))
                val = ((d - 1) * prev + _quad_coeff(qv, d, (a, b - 1, 0))) / d
            else:
                prev = entries.get(((d,), (a + 2, b, c - 1)), Fraction(0))
                val = (prev + _quad_coeff(qw, d, (a, b, c - 1))) / (d * d)
            if val:
                entries[((d,), (a, b, c))] = val
    return SeriesTable(P2_SPACE, dmax, entries)


def _genus1_correction_blocks(g0: SeriesTable) -> tuple[SeriesTable, SeriesTable]:
    """The 1/24 blocks of the two genus-1 equations (pure genus-0 data)."""
    L, P = line_operator(), point_operator()
    g_s = g0.partial("s")
    g_u = g0.partial("u")
    g_ss = g_s.partial("s")
    g_us = g_u.partial("s")
    rv = (
        L(g_ss)
        + P(g_us)
        - L(g_s).scale(2)
        + g_s.scale(2)
        - g_ss
        - g0.partial("v").partial("s").times_monomial({"v": 1}, 2)
        - g0.partial("w").partial("s").times_monomial({"v": 2}, 2)
        - g0.partial("w").partial("s").times_monomial({"w": 1}, 2)
    )
    g_uu = g_u.partial("u")
    rw = (
        L(g_us)
        + P(g_uu)
        - L(g_u).scale(2)
        + g_u.scale(2)
        - g_us
        - g0.partial("v").partial("u").times_monomial({"v": 1}, 2)
        - g0.partial("w").partial("u").times_monomial({"v": 2}, 2)
        - g0.partial("w").partial("u").times_monomial({"w": 1}, 2)
    )
    return rv.scale(Fraction(1, 24)), rw.scale(Fraction(1, 24))


def charnum_genus1(
    g0: SeriesTable,
    seeds: dict[int, Rat],
    dmax: int,
    check_overdetermined: bool = False,
) -> SeriesTable:
    """Genus-1 characteristic numbers by direct recursion.

    Internally solves for the double-cover-inclusive potential and subtracts
    E at the end.  `seeds` maps d to the point-only count N^1_d(3d,0,0);
    missing degrees raise KeyError.
    """
    L, P = line_operator(), point_operator()
    rv24, rw24 = _genus1_correction_blocks(g0)
    e_table, _ = cover_polynomials()
    entries: dict = {}
    for d in range(1, dmax + 1):
        if d not in seeds:
            raise KeyError(f"genus-1 seed for degree {d} is missing")
        if seeds[d]:
            entries[((d,), (3 * d, 0, 0))] = Fraction(seeds[d])
        lower = SeriesTable(P2_SPACE, dmax, {k: v for k, v in entries.items() if k[0][0] < d})
        lg0s, pg0s = L(g0.partial("s")), P(g0.partial("s"))
        lg0u, pg0u = L(g0.partial("u")), P(g0.partial("u"))
        qv = lg0s * lower.partial("s") + pg0s * lower.partial("u")
        qw = lg0u * lower.partial("s") + pg0u * lower.partial("u")
        for a, b, c in _strata(1, d):
            if b == 0 and c == 0:
                continue
            vals = []
            if c > 0:
                vals.append(_quad_coeff(qw, d, (a, b, c - 1)) + _quad_coeff(rw24, d, (a, b, c - 1)))
            if b > 0 and (c == 0 or check_overdetermined):
                prev = entries.get(((d,), (a + 1, b - 1, c)), Fraction(0))
                vals.append(
                    prev
                    + _quad_coeff(qv, d, (a, b - 1, c))
                    + _quad_coeff(rv24, d, (a, b - 1, c))
                )
            if check_overdetermined and len(set(vals)) > 1:
                raise ValueError(
                    f"genus-1 tangency/flag equations disagree at d={d}, (a,b,c)=({a},{b},{c}): {vals}"
                )
            if vals[0]:
                entries[((d,), (a, b, c))] = vals[0]
    solved = SeriesTable(P2_SPACE, dmax, entries)
    return solved - e_table.truncate(dmax)


def to_char_variables(gamma_table: SeriesTable, space: TangencySpace) -> SeriesTable:
    """Change of variables from tangency-potential coordinates to (s,u,v,w):
    x2 = u + v, y1 = v, y2 = w (and the degree slot is renamed to s)."""
    return gamma_table.substitute(
        P2_SPACE,
        {"x2": [(1, "u"), (1, "v")], "y1": [(1, "v")], "y2": [(1, "w")]},
        degree_map={"x1": "s"},
    )


def charnum_genus1_virtual_route(
    geom: TargetGeometry,
    gw: GWTable,
    g0: SeriesTable,
    seeds: dict[int, Rat],
    dmax: int,
    check_overdetermined: bool = False,
) -> SeriesTable:
    """Genus-1 numbers via the tangency potential and the correction formula
    enumerative = virtual + (1/24) P G^0 - E."""
    gamma0 = genus0_tangency_potential(geom, gw, dmax)
    seeds_by_class = {(d,): Fraction(v) for d, v in seeds.items()}
    gamma1 = genus1_tangency_potential(
        geom, gamma0, seeds_by_class, dmax, check_overdetermined=check_overdetermined
    )
    virtual = to_char_variables(gamma1, TangencySpace(geom))
    e_table, _ = cover_polynomials()
    P = point_operator()
    return virtual + P(g0).scale(Fraction(1, 24)) - e_table.truncate(dmax)


def genus2_corrections(g0: SeriesTable, g1: SeriesTable) -> SeriesTable:
    """The terms added to G^2 to produce the virtual potential (degree >= 4
    part; the degree-2/3 degenerate-cover terms are never evaluated)."""
    L, P = line_operator(), point_operator()
    _, h_table = cover_polynomials()
    h = h_table.truncate(g0.dmax)
    two_tail = P(P(g0)).scale(Fraction(1, 2 * 24 * 24))
    one_tail = P(g1).scale(Fraction(-1, 24))
    cover = h.partial("s") * L(g0) + h.partial("u") * P(g0)
    return one_tail + two_tail + cover


def charnum_genus2(
    g0: SeriesTable,
    g1: SeriesTable,
    virtual2: SeriesTable,
    dmax: int,
) -> SeriesTable:
    """Genus-2 characteristic numbers for 4 <= d <= dmax from ingested
    virtual numbers; degrees below 4 are out of enumerative scope."""
    if dmax < 4:
        raise ValueError(
            "genus-2 enumerative output needs d >= 4: the degree-2 and degree-3 "
            "degenerate-cover terms are not evaluated"
        )
    out = virtual2.truncate(dmax) - genus2_corrections(g0, g1).truncate(dmax)
    return out.filter_keys(lambda deg, mono: deg[0] >= 4)


def table_records(table: SeriesTable, genus: int):
    """(d, a, b, c, value) rows in lexicographic order."""
    rows = []
    for (deg, mono), val in sorted(table.entries.items()):
        rows.append((deg[0], mono[0], mono[1], mono[2], val))
    return rows

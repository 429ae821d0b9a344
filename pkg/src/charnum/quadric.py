r"""Characteristic numbers on P^1 x P^1 (genus 0 and 1) and the simple
Hurwitz numbers that drive the genus-1 corrections.

Conditions: a points, b tangencies with general (1,1)-curves, c such
tangencies at specified points.  N^g_{(d1,d2)}(a,b,c) is zero unless
a + b + 2c = 2(d1+d2) - 1 + g; tables are symmetric under swapping rulings.

Hurwitz potentials H^g(t,v) = sum_{d>0} e^{dt} sum_b v^b/b! N^g_d(b) count
d-sheeted genus-g covers of the sphere simply branched over b = 2d + 2g - 2
points; they satisfy

    H0_vt = v H0_tt . H0_tt
    H1_v  = 2v H0_tt . H1_t + (1/24) 2v (H0_ttt - H0_tt)

seeded only by the identity cover N^0_1(0) = 1.  Genus-1 covers of a ruling,
packaged as I = u H1_{u1} + (v^2 + w) H1_v (and J with the rulings swapped),
are the excess components behind the genus-1 correction formula

    virtual = G1 - (1/24) P G0 + I_{u1}.L1 G0 + I_u.P G0
                                + J_{u2}.L2 G0 + J_u.P G0,

with the ruling operators L1 = d/du2 + 2v d/du, L2 = d/du1 + 2v d/du and
P = 2v d/du1 + 2v d/du2 + (4v^2 + 2w) d/du.
"""

from __future__ import annotations

from fractions import Fraction

from .descend import genus0_tangency_potential, genus1_tangency_potential
from .geometry import TargetGeometry
from .gw import GWTable
from .series import DiffOperator, Rat, SeriesTable, VarSpace

__all__ = [
    "HURWITZ_SPACE",
    "Q_SPACE",
    "hurwitz",
    "hurwitz_in_ruling",
    "rule_cover_potentials",
    "ruling_operators",
    "quadric_genus0",
    "quadric_genus1",
    "quadric_dim_ok",
]

HURWITZ_SPACE = VarSpace(("t",), ("v",))
Q_SPACE = VarSpace(("u1", "u2"), ("u", "v", "w"))


def hurwitz(gmax: int, dmax: int) -> dict[tuple[int, int, int], Rat]:
    """Simple Hurwitz numbers as {(g, d, b): value}, g <= gmax <= 1."""
    if gmax > 1:
        raise ValueError("only genus 0 and 1 are covered by the two recursions")
    h0: dict = {((1,), (0,)): Fraction(1)}
    for d in range(2, dmax + 1):
        lower = SeriesTable(HURWITZ_SPACE, dmax, h0)
        tt = lower.partial("t").partial("t")
        rhs = (tt * tt).times_monomial({"v": 1})
        b = 2 * d - 2
        val = rhs.coeff((d,), (b - 1,)) / d
        if val:
            h0[((d,), (b,))] = val
    out = {(0, deg[0], mono[0]): v for (deg, mono), v in h0.items()}
    if gmax == 0:
        return out
    h0t = SeriesTable(HURWITZ_SPACE, dmax, h0)
    h1: dict = {}
    for d in range(1, dmax + 1):
        lower = SeriesTable(HURWITZ_SPACE, dmax, h1)
        tt = h0t.partial("t").partial("t")
        rhs = (tt * lower.partial("t")).times_monomial({"v": 1}, 2) + (
            h0t.partial("t").partial("t").partial("t") - tt
        ).times_monomial({"v": 1}, Fraction(2, 24))
        b = 2 * d
        val = rhs.coeff((d,), (b - 1,))
        if val:
            h1[((d,), (b,))] = val
    for (deg, mono), v in h1.items():
        out[(1, deg[0], mono[0])] = v
    return out


def hurwitz_in_ruling(table: dict[tuple[int, int, int], Rat], genus: int, ruling: int, dmax: int) -> SeriesTable:
    """The genus-g Hurwitz potential placed on one ruling of the quadric."""
    entries = {}
    for (g, d, b), val in table.items():
        if g != genus or d > dmax:
            continue
        beta = (d, 0) if ruling == 1 else (0, d)
        entries[(beta, (0, b, 0))] = val
    return SeriesTable(Q_SPACE, dmax, entries)


def rule_cover_potentials(h1_table: dict[tuple[int, int, int], Rat], dmax: int) -> tuple[SeriesTable, SeriesTable]:
    """I and J: genus-1 multiple covers of a horizontal resp. vertical rule.

    The supporting rule is pinned by one incidence condition (i mark choices),
    by two tangency conditions (through an intersection point), or by one
    flag condition; hence u H1_{u1} + (v^2 + w) H1_v per ruling.
    """
    out = []
    for ruling, dvar in ((1, "u1"), (2, "u2")):
        h1 = hurwitz_in_ruling(h1_table, 1, ruling, dmax)
        pot = h1.partial(dvar).times_monomial({"u": 1}) + h1.partial("v").times_monomial(
            {"v": 2}
        ) + h1.partial("v").times_monomial({"w": 1})
        out.append(pot)
    return out[0], out[1]


def ruling_operators() -> tuple[DiffOperator, DiffOperator, DiffOperator]:
    l1 = DiffOperator.build([(1, {}, "u2"), (2, {"v": 1}, "u")])
    l2 = DiffOperator.build([(1, {}, "u1"), (2, {"v": 1}, "u")])
    p = DiffOperator.build(
        [(2, {"v": 1}, "u1"), (2, {"v": 1}, "u2"), (4, {"v": 2}, "u"), (2, {"w": 1}, "u")]
    )
    return l1, l2, p


def quadric_dim_ok(genus: int, d1: int, d2: int, a: int, b: int, c: int) -> bool:
    return a + b + 2 * c == 2 * (d1 + d2) - 1 + genus


def _strata(genus: int, total: int):
    top = 2 * total - 1 + genus
    for c in range(top // 2 + 1):
        for b in range(top - 2 * c + 1):
            yield top - b - 2 * c, b, c


def _ds(f: SeriesTable) -> SeriesTable:
    return f.partial("u1") + f.partial("u2")


def quadric_genus0(gw: GWTable, dmax: int) -> SeriesTable:
    """Genus-0 quadric characteristic numbers up to total degree dmax."""
    if gw.geom.name != "p1xp1":
        raise ValueError("the quadric pipeline needs the p1xp1 geometry")
    geom = gw.geom
    l1, l2, p = ruling_operators()
    entries: dict = {}
    for total in range(1, dmax + 1):
        for beta in geom.curve_classes(total):
            n = 2 * total - 1
            entries[(beta, (n, 0, 0))] = gw.lookup(beta, [3] * n)
        lower = SeriesTable(Q_SPACE, dmax, {k: v for k, v in entries.items() if sum(k[0]) < total})
        g_s = _ds(lower)
        g_ss = _ds(g_s)
        qv = (
            g_s.partial("u1") * l1(g_s) + g_s.partial("u2") * l2(g_s) + g_s.partial("u") * p(g_s)
        ).scale(Fraction(1, 2))
        g_u = lower.partial("u")
        qw = (
            g_u.partial("u1") * l1(g_ss)
            + g_u.partial("u2") * l2(g_ss)
            + g_u.partial("u") * p(g_ss)
        )
        for beta in geom.curve_classes(total):
            for a, b, c in _strata(0, total):
                if b == 0 and c == 0:
                    continue
                if c == 0:
                    prev = entries.get((beta, (a + 1, b - 1, 0)), Fraction(0))
                    val = (2 * (total - 1) * prev + qv.coeff(beta, (a, b - 1, 0))) / total
                else:
                    prev = entries.get((beta, (a + 2, b, c - 1)), Fraction(0))
                    val = (2 * prev + qw.coeff(beta, (a, b, c - 1))) / (total * total)
                if val:
                    entries[(beta, (a, b, c))] = val
    return SeriesTable(Q_SPACE, dmax, entries)


def to_quadric_variables(gamma_table: SeriesTable, geom: TargetGeometry) -> SeriesTable:
    """Change of variables x3 = u + 2v, y1 = y2 = v, y3 = w; degree slots
    become the ruling variables."""
    return gamma_table.substitute(
        Q_SPACE,
        {
            "x3": [(1, "u"), (2, "v")],
            "y1": [(1, "v")],
            "y2": [(1, "v")],
            "y3": [(1, "w")],
        },
        degree_map={"x1": "u1", "x2": "u2"},
    )


def quadric_genus1(
    geom: TargetGeometry,
    gw: GWTable,
    g0: SeriesTable,
    seeds: dict[tuple[int, int], Rat],
    dmax: int,
    check_overdetermined: bool = False,
) -> SeriesTable:
    """Genus-1 quadric characteristic numbers via the correction formula.

    `seeds` maps bidegrees to the genus-1 point-only invariant.  Only entries
    with both partial degrees positive are enumerative; rule-supported
    bidegrees are dropped from the output.
    """
    gamma0 = genus0_tangency_potential(geom, gw, dmax)
    gamma1 = genus1_tangency_potential(
        geom, gamma0, {tuple(k): Fraction(v) for k, v in seeds.items()}, dmax,
        check_overdetermined=check_overdetermined,
    )
    virtual = to_quadric_variables(gamma1, geom)
    l1, l2, p = ruling_operators()
    hur = hurwitz(1, dmax)
    i_pot, j_pot = rule_cover_potentials(hur, dmax)
    g1 = (
        virtual
        + p(g0).scale(Fraction(1, 24))
        - i_pot.partial("u1") * l1(g0)
        - i_pot.partial("u") * p(g0)
        - j_pot.partial("u2") * l2(g0)
        - j_pot.partial("u") * p(g0)
    )
    return g1.filter_keys(lambda deg, mono: deg[0] >= 1 and deg[1] >= 1)

from __future__ import annotations

import pytest

from charnum.geometry import builtin_geometry
from charnum.gw import wdvv_solve
from charnum.planecurves import charnum_genus0, charnum_genus1
from charnum.quadric import hurwitz, quadric_genus0, quadric_genus1
from charnum.seeds import default_gw_seeds, load_genus1_seeds, packaged_seed_text


@pytest.fixture(scope="session")
def p2():
    return builtin_geometry("p2")


@pytest.fixture(scope="session")
def quadric():
    return builtin_geometry("p1xp1")


@pytest.fixture(scope="session")
def gr24():
    return builtin_geometry("gr24")


@pytest.fixture(scope="session")
def gw_p2(p2):
    return wdvv_solve(p2, default_gw_seeds(p2), 5)


@pytest.fixture(scope="session")
def gw_quadric(quadric):
    return wdvv_solve(quadric, default_gw_seeds(quadric), 6)


@pytest.fixture(scope="session")
def g0_p2(gw_p2):
    return charnum_genus0(gw_p2, 4)


@pytest.fixture(scope="session")
def p2_genus1_seeds(p2):
    table = load_genus1_seeds(packaged_seed_text("p2-genus1"), p2)
    return {beta[0]: v for beta, v in table.items()}


@pytest.fixture(scope="session")
def g1_p2(g0_p2, p2_genus1_seeds):
    return charnum_genus1(g0_p2, p2_genus1_seeds, 4, check_overdetermined=True)


@pytest.fixture(scope="session")
def quadric_genus1_seeds(quadric):
    return load_genus1_seeds(packaged_seed_text("p1xp1-genus1"), quadric)


@pytest.fixture(scope="session")
def g0_quadric(gw_quadric):
    return quadric_genus0(gw_quadric, 5)


@pytest.fixture(scope="session")
def g1_quadric(quadric, gw_quadric, g0_quadric, quadric_genus1_seeds):
    return quadric_genus1(
        quadric, gw_quadric, g0_quadric, quadric_genus1_seeds, 5, check_overdetermined=True
    )


@pytest.fixture(scope="session")
def hurwitz_table():
    return hurwitz(1, 5)

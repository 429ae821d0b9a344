from __future__ import annotations

from fractions import Fraction

import pytest

from charnum.oracles import (
    cross_check,
    hurwitz_bruteforce,
    schubert_gr24_cup_table,
    schubert_gr24_product,
)


def test_trivial_cover():
    assert hurwitz_bruteforce(1, 0).count == 1
    assert hurwitz_bruteforce(1, 3).count == 0


def test_two_sheets():
    # the single tuple ((12),(12)) over |S_2| = 2
    out = hurwitz_bruteforce(2, 2)
    assert out.count == Fraction(1, 2)
    assert out.genus == 0


def test_three_sheets_genus0():
    assert hurwitz_bruteforce(3, 4).count == 4


def test_parity_vanishing():
    # odd transposition count can never multiply to the identity
    assert hurwitz_bruteforce(3, 3).count == 0


def test_intransitive_tuples_excluded():
    # in S_3 with b = 2, products ((ij),(ij)) are identity but intransitive
    assert hurwitz_bruteforce(3, 2).count == 0


def test_deterministic():
    assert hurwitz_bruteforce(3, 4) == hurwitz_bruteforce(3, 4)


def test_size_limit():
    with pytest.raises(ValueError, match="size limit"):
        hurwitz_bruteforce(6, 2)
    with pytest.raises(ValueError, match="size limit"):
        hurwitz_bruteforce(5, 9)


def test_cross_check_reports_key():
    a = {("x",): Fraction(1), ("y",): Fraction(2)}
    b = {("x",): Fraction(1), ("y",): Fraction(3), ("z",): Fraction(0)}
    report = cross_check(a, b)
    assert report == [(("y",), Fraction(2), Fraction(3))]
    assert cross_check(a, dict(a)) == []


def test_schubert_pieri_square():
    assert schubert_gr24_product((1, 0), (1, 0)) == {(2, 0): 1, (1, 1): 1}
    assert schubert_gr24_product((1, 0), (2, 1)) == {(2, 2): 1}
    assert schubert_gr24_product((2, 0), (1, 1)) == {}
    assert schubert_gr24_product((2, 0), (2, 0)) == {(2, 2): 1}


def test_schubert_table_is_symmetric():
    table = schubert_gr24_cup_table()
    for i in range(6):
        for j in range(6):
            assert table[(i, j)] == table[(j, i)]


def test_schubert_poincare_pairs():
    table = schubert_gr24_cup_table()
    # complementary classes hit the point class exactly once
    assert table[(1, 4)][5] == 1
    assert table[(2, 2)][5] == 1
    assert table[(3, 3)][5] == 1
    assert table[(2, 3)][5] == 0

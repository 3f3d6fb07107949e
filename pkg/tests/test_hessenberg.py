"""Matrix storage, the permutation-sum oracle, and the chain recurrence."""

from fractions import Fraction
from random import Random

import pytest

from vclde import (
    BandedHessenbergMatrix,
    HessenbergMatrix,
    Permutation,
    StructureError,
    TermSum,
    det_leibniz_oracle,
    det_recurrence,
    h_sym,
    hessenberg_from_json,
    hessenberg_to_json,
    leading_principal_chain,
)
from testutil import random_hessenberg, rational


def laplace_det(rows):
    """Independent oracle: cofactor expansion along the first row."""
    k = len(rows)
    if k == 0:
        return TermSum.constant(1)
    if k == 1:
        return rows[0][0]
    total = None
    for j in range(k):
        minor = [row[:j] + row[j + 1 :] for row in rows[1:]]
        term = rows[0][j] * laplace_det(minor)
        if j % 2:
            term = -term
        total = term if total is None else total + term
    return total


def symbol_rows(k):
    return [[h_sym(i, j) for j in range(1, k + 1)] for i in range(1, k + 1)]


def test_oracle_empty_matrix():
    assert det_leibniz_oracle([]) == 1


def test_oracle_2x2():
    assert det_leibniz_oracle([[1, 2], [3, 4]]) == -2


def test_oracle_general_3x3_matches_cofactor_expansion():
    rows = symbol_rows(3)
    expansion = det_leibniz_oracle(rows)
    assert expansion.term_count == 6
    assert expansion == laplace_det(rows)


def test_oracle_limit_guard():
    rows = [[1] * 10 for _ in range(10)]
    with pytest.raises(ValueError):
        det_leibniz_oracle(rows)
    assert det_leibniz_oracle([[2]], oracle_limit=1) == 2


def test_permutation_signs():
    assert Permutation((1, 2, 3)).sign == 1
    assert Permutation((2, 1, 3)).sign == -1
    assert Permutation((2, 3, 1)).sign == 1
    with pytest.raises(ValueError):
        Permutation((1, 1, 2))


def test_det_recurrence_base_cases():
    h = HessenbergMatrix.from_function(1, h_sym, "symbolic")
    assert det_recurrence(h) == h_sym(1, 1)
    empty = HessenbergMatrix.from_rows([])
    assert det_recurrence(empty) == Fraction(1)


def test_det_recurrence_2x2_symbolic():
    h = HessenbergMatrix.from_function(2, h_sym, "symbolic")
    assert det_recurrence(h) == h_sym(1, 1) * h_sym(2, 2) - h_sym(1, 2) * h_sym(2, 1)


def test_det_recurrence_matches_oracle_random():
    rng = Random(20240811)
    for k in range(9):
        for _ in range(15):
            matrix = random_hessenberg(rng, k)
            assert det_recurrence(matrix) == det_leibniz_oracle(matrix)


def test_leading_principal_chain():
    h = HessenbergMatrix.from_function(1, h_sym, "symbolic")
    assert leading_principal_chain(h) == [TermSum.constant(1), h_sym(1, 1)]
    ones = HessenbergMatrix.from_rows([[Fraction(1), Fraction(1)], [Fraction(1), Fraction(1)]])
    assert leading_principal_chain(ones) == [Fraction(1), Fraction(1), Fraction(0)]
    rng = Random(7)
    matrix = random_hessenberg(rng, 6)
    assert leading_principal_chain(matrix)[-1] == det_recurrence(matrix)


def test_chain_c_view_matches_h_view():
    rng = Random(11)
    for k in (1, 3, 6):
        matrix = random_hessenberg(rng, k)
        assert leading_principal_chain(matrix, view="c") == leading_principal_chain(matrix)
    symbolic = HessenbergMatrix.from_function(4, h_sym, "symbolic")
    assert leading_principal_chain(symbolic, view="c") == leading_principal_chain(symbolic)


def test_banded_matches_dense_embedding():
    rng = Random(13)
    for k, p in ((5, 2), (7, 3), (6, 1), (3, 4)):
        banded = BandedHessenbergMatrix.from_function(
            k, p, lambda i, j: rational(rng), "rational"
        )
        dense = banded.to_dense()
        assert det_recurrence(banded) == det_recurrence(dense)
        assert det_recurrence(banded) == det_leibniz_oracle(dense)
        for i in range(1, k + 1):
            for j in range(1, k + 1):
                assert banded.h(i, j) == dense.h(i, j)


def test_band_zero_pattern():
    banded = BandedHessenbergMatrix.from_function(
        6, 2, lambda i, j: Fraction(1), "rational"
    )
    assert banded.h(4, 1) == 0
    assert banded.h(1, 3) == 0
    assert banded.h(4, 3) == 1
    assert banded.row_start(5) == 4


def test_superdiagonal_queries_are_exact_zero():
    matrix = HessenbergMatrix.from_rows([[Fraction(1), Fraction(2)], [Fraction(3), Fraction(4)]])
    with pytest.raises(IndexError):
        matrix.h(0, 1)
    three = random_hessenberg(Random(1), 3)
    assert three.h(1, 3) == 0


def test_from_rows_rejects_bad_pattern():
    with pytest.raises(StructureError):
        HessenbergMatrix.from_rows([[1, 2, 3], [4, 5, 6], [7, 8, 9]])


def test_c_view_flips_superdiagonal():
    matrix = HessenbergMatrix.from_function(3, h_sym, "symbolic")
    assert matrix.c(1, 2) == -h_sym(1, 2)
    assert matrix.c(2, 1) == h_sym(2, 1)
    assert matrix.c(3, 3) == h_sym(3, 3)


def test_json_round_trip():
    rng = Random(3)
    matrix = random_hessenberg(rng, 5)
    doc = hessenberg_to_json(matrix)
    back = hessenberg_from_json(doc)
    assert det_recurrence(back) == det_recurrence(matrix)
    for i in range(1, 6):
        for j in range(1, 6):
            assert back.h(i, j) == matrix.h(i, j)


def test_json_rejects_pattern_violations():
    with pytest.raises(StructureError):
        hessenberg_from_json({"k": 3, "entries": [[1, 3, "1"]]})
    hessenberg_from_json({"k": 3, "entries": [[1, 3, "0"]]})  # explicit zero is fine
    with pytest.raises(StructureError):
        hessenberg_from_json({"k": 2, "entries": [[1, 1, "1"], [1, 1, "2"]]})
    with pytest.raises(StructureError):
        hessenberg_from_json({"k": 2, "entries": [[3, 1, "1"]]})
    with pytest.raises(StructureError):
        hessenberg_from_json({"k": -1, "entries": []})


def test_json_float_mode():
    doc = {"k": 2, "entries": [[1, 1, 0.5], [2, 1, 1.0], [2, 2, 2.0], [1, 2, 1.0]]}
    matrix = hessenberg_from_json(doc, arith="float64")
    assert det_recurrence(matrix) == 0.5 * 2.0 - 1.0 * 1.0

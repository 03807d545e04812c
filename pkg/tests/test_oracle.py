import pytest

from starq.explicit import coeff_B, coeff_stage1, coeff_table
from starq.oracle import solve_table, stage1_by_recursion


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_stage_one_recursion_matches_closed_form(n):
    for K in range(7):
        for a in range(K + 1):
            for b in range(K + 1 - a):
                assert stage1_by_recursion(n, K, a, b) == coeff_stage1(n, K, a, b)


def test_stage_one_recursion_domain():
    with pytest.raises(ValueError):
        stage1_by_recursion(1, 1, 2, 0)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_solved_table_matches_closed_form(n):
    for k in range(4):
        for l in range(4):
            assert solve_table(n, k, l) == coeff_table(n, k, l)


def test_oracle_normalization():
    for n in range(1, 5):
        for k in range(6):
            for l in range(6):
                t = solve_table(n, k, l) if k + l <= 4 else None
                K = k + l
                assert stage1_by_recursion(n, K, 0, 0) == 1
                if k:
                    assert stage1_by_recursion(n, K, 1, 0) == coeff_B(n, k, l, 1, 0, 0, 0) == 1 / 2
                if l:
                    assert stage1_by_recursion(n, K, 0, 1) == -1 / 2
                if t is not None:
                    assert t[(0, 0, 0, 0)] == 1

"""Sweeps, root extraction, symmetry checks, and CSV serialization."""

import numpy as np
import pytest

from opa import (
    InvalidArgumentError,
    Polynomial,
    degree_collapse_check,
    format_complex_csv,
    gram_solve_p2,
    opa_roots,
    rotation_symmetry_check,
    roots_of_coeffs,
    rows_to_csv,
    sweep_degree,
    sweep_function_sequence,
    sweep_p,
)


def test_sweep_p_rows_sorted_and_converged(grid):
    f = Polynomial([1.0, 0.5])
    rows = sweep_p(f, 1, [4.0, 2.0, 3.0], grid=grid)
    assert [r.key for r in rows] == [2.0, 3.0, 4.0]
    assert all(r.converged for r in rows)
    assert all(np.isfinite(r.error) and r.error > 0 for r in rows)
    # the p = 2 row is the direct projection
    direct = gram_solve_p2(f, 1, grid=grid)
    np.testing.assert_allclose(rows[0].coeffs, direct.coeffs, atol=1e-10)


def test_sweep_p_records_failures(grid):
    rows = sweep_p(Polynomial([0.0, 1.0]), 1, [2.0, 3.0], grid=grid)
    # degenerate instance solves exactly (q = 0), so rows carry the flag note
    assert len(rows) == 2
    for r in rows:
        assert r.converged
        assert abs(r.error - 1.0) < 1e-12


def test_sweep_degree_errors_decrease(grid):
    f = Polynomial([1.0, 0.5])
    rows = sweep_degree(f, 3.0, 3, grid=grid)
    assert [r.key for r in rows] == [0, 1, 2, 3]
    errs = [r.error for r in rows]
    assert all(a >= b - 1e-10 for a, b in zip(errs, errs[1:]))


def test_sweep_function_sequence_distances(grid):
    f_list = [Polynomial([1.0, 0.5]), Polynomial([1.0, 0.5, 0.05]),
              Polynomial([1.0, 0.5, 0.05, 0.005])]
    rows = sweep_function_sequence(f_list, 1, 3.0, grid=grid)
    assert len(rows) == 3
    assert rows[-1].dist_to_final == 0.0
    assert all(r.dist_to_final is not None for r in rows)
    # drift to the final iterate shrinks as the sequence settles
    assert rows[0].dist_to_final >= rows[1].dist_to_final - 1e-12


def test_roots_of_coeffs_trims_noise():
    w = 0.3 + 0.4j
    got = roots_of_coeffs([-w, 1.0])
    np.testing.assert_allclose(got, [w], atol=1e-12)
    # a solver-noise trailing coefficient must not spawn a huge fake root
    got2 = roots_of_coeffs([-w, 1.0, 1e-20])
    np.testing.assert_allclose(got2, [w], atol=1e-10)
    assert roots_of_coeffs([2.0]).size == 0


def test_opa_roots_match_coefficients(grid):
    f = Polynomial([1.0, 2.0])
    assert opa_roots(f, 0, 3.0, grid=grid).size == 0
    roots = opa_roots(f, 1, 2.0, grid=grid)
    direct = gram_solve_p2(f, 1, grid=grid)
    np.testing.assert_allclose(np.sort_complex(roots),
                               np.sort_complex(roots_of_coeffs(direct.coeffs)),
                               atol=1e-10)


@pytest.mark.parametrize("gamma", [1j, np.exp(0.7j)])
def test_rotation_symmetry_small_discrepancy(grid, gamma):
    disc = rotation_symmetry_check(Polynomial([1.0, 0.5]), 3.0, gamma, grid=grid)
    assert disc < 1e-7


def test_rotation_symmetry_rejects_bad_gamma(grid):
    with pytest.raises(InvalidArgumentError):
        rotation_symmetry_check(Polynomial([1.0, 0.5]), 3.0, 2.0, grid=grid)


def test_degree_collapse_applicable(grid):
    rep = degree_collapse_check(Polynomial([1.0, 2.0]), 1, 3.0, grid=grid)
    assert rep.applicable
    assert rep.discrepancy < 1e-6
    assert rep.root is not None


def test_degree_collapse_rootless(grid):
    # the degree-0 approximant is a constant: nothing to divide out
    rep = degree_collapse_check(Polynomial([1.0, 0.5]), 0, 3.0, grid=grid)
    assert not rep.applicable
    assert "no roots" in rep.note


def test_format_complex_csv_forms():
    assert format_complex_csv(1.5 - 0.25j) == "1.5-0.25i"
    assert format_complex_csv(2.0) == "2.0+0.0i"
    assert format_complex_csv(-1.0 + 1.0j) == "-1.0+1.0i"


def test_rows_to_csv_shape(grid):
    rows = sweep_p(Polynomial([1.0, 0.5]), 1, [2.0, 3.0], grid=grid)
    text = rows_to_csv(rows)
    lines = text.strip().splitlines()
    assert lines[0].startswith("key,coeffs,error")
    assert len(lines) == 3
    # complex cells use the re+imi form and parse back
    cell = lines[1].split(",")[1].strip('"').split(";")[0]
    assert cell.endswith("i")

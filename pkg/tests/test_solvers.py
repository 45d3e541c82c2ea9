"""Solver layer: direct p = 2 solve, convex descent, dispatch, and the
fixed-point iterations."""

import numpy as np
import pytest

from opa import (
    BoundarySamples,
    InvalidArgumentError,
    OpaProblem,
    Polynomial,
    Rational,
    SolverOptions,
    fixed_point_degree0,
    fixed_point_degree1,
    gram_solve_p2,
    lp_norm,
    minimize_in_span,
    orthogonality_residuals,
    solve,
    solve_general,
)
from conftest import random_poly

npoly = np.polynomial.polynomial


def test_solver_options_validation():
    with pytest.raises(InvalidArgumentError):
        SolverOptions(tol_residual=0.0)
    with pytest.raises(InvalidArgumentError):
        SolverOptions(continuation_factor=1.5)
    with pytest.raises(InvalidArgumentError):
        SolverOptions(max_iters=0)


def test_gram_solve_known_error(grid):
    # degree-0 projection: error^2 = 1 - |f(0)|^2 / ||f||_2^2 = 4/5 for 1+2z
    r = gram_solve_p2(Polynomial([1.0, 2.0]), 0, grid=grid)
    assert abs(r.error - np.sqrt(0.8)) < 1e-12
    assert abs(r.coeffs[0] - 0.2) < 1e-12
    assert r.method == "gram2"
    assert r.residual_max < 1e-12


def test_gram_matches_convex_descent(grid):
    rng = np.random.default_rng(5)
    for _ in range(4):
        f = random_poly(rng, max_deg=4)
        n = int(rng.integers(0, 3))
        direct = gram_solve_p2(f, n, grid=grid)
        iterated = solve_general(OpaProblem(f=f, degree=n, p=2.0, grid=grid))
        assert iterated.converged
        np.testing.assert_allclose(iterated.coeffs, direct.coeffs, atol=1e-8)


def test_minimize_in_span_p2_is_projection(grid):
    # span {1}: the best constant at p = 2 is the mean of the target
    t = 0.3 + grid.nodes + 2.0 * grid.nodes ** 2
    a, info = minimize_in_span(np.ones((1, grid.n_points)), t, 2.0)
    assert info.converged
    assert abs(a[0] - 0.3) < 1e-10


def test_minimize_in_span_input_checks(grid):
    ones = np.ones((1, grid.n_points))
    with pytest.raises(InvalidArgumentError):
        minimize_in_span(ones, np.ones(grid.n_points - 1), 3.0)
    with pytest.raises(InvalidArgumentError):
        minimize_in_span(ones, np.full(grid.n_points, np.nan), 3.0)
    with pytest.raises(InvalidArgumentError):
        minimize_in_span(ones, np.ones(grid.n_points), 3.0,
                         a_init=np.ones(2))
    with pytest.raises(InvalidArgumentError):
        minimize_in_span(ones, np.ones(grid.n_points), 1.0)


@pytest.mark.parametrize("p", [1.5, 2.5, 3.0, 4.0, 6.0])
def test_convex_solver_certificate(grid, p):
    f = Polynomial([1.0, 0.5, 0.25])
    r = solve(f, 2, p, grid=grid)
    assert r.residual_max < 1e-8
    # certificate recomputed from scratch agrees
    res = orthogonality_residuals(r.coeffs, f, p, grid=grid)
    assert float(np.max(np.abs(res))) < 1e-8
    # the reported error is the norm of the reported residual construction
    vals = npoly.polyval(grid.nodes, r.coeffs) * f.evaluate(grid.nodes) - 1.0
    assert abs(lp_norm(BoundarySamples(grid, vals), p) - r.error) < 1e-12


def test_perturbing_optimum_raises_objective(grid):
    f = Polynomial([1.0, 0.5])
    p = 3.0
    r = solve(f, 1, p, grid=grid)
    fvals = f.evaluate(grid.nodes)

    def obj(c):
        vals = npoly.polyval(grid.nodes, c) * fvals - 1.0
        return lp_norm(BoundarySamples(grid, vals), p)

    base = obj(r.coeffs)
    rng = np.random.default_rng(2)
    for _ in range(5):
        d = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        assert obj(r.coeffs + 1e-4 * d) >= base - 1e-12


def test_degenerate_constant_term(grid):
    # mean f = 0 forces q = 0 with unit error
    r = solve(Polynomial([0.0, 1.0]), 1, 3.0, grid=grid)
    assert "degenerate-f0" in r.flags
    np.testing.assert_allclose(r.coeffs, 0.0, atol=1e-15)
    assert abs(r.error - 1.0) < 1e-12


def test_solve_rejects_bad_inputs(grid):
    f = Polynomial([1.0, 0.5])
    with pytest.raises(InvalidArgumentError):
        solve(f, 1, 1.0, grid=grid)
    with pytest.raises(InvalidArgumentError):
        solve(f, 1, 3.0, method="gram2", grid=grid)
    with pytest.raises(InvalidArgumentError):
        solve(f, 2, 3.0, method="fixed-point", grid=grid)
    with pytest.raises(InvalidArgumentError):
        solve(f, -1, 3.0, grid=grid)
    with pytest.raises(InvalidArgumentError):
        solve(f, grid.n_points, 3.0, grid=grid)
    with pytest.raises(InvalidArgumentError):
        solve(f, 1, 3.0, method="newton", grid=grid)
    with pytest.raises(InvalidArgumentError):
        solve(Polynomial([0.0]), 1, 3.0, grid=grid)


def test_dispatch_labels(grid):
    f = Polynomial([1.0, 0.5])
    assert solve(f, 1, 2.0, grid=grid).method == "gram2"
    assert solve(f, 1, 3.0, grid=grid).method == "convex"
    assert solve(f, 0, 3.0, method="fixed-point", grid=grid).method == "fixed_point0"
    assert solve(f, 1, 3.0, method="fixed-point", grid=grid).method == "fixed_point1"


def test_custom_target(grid):
    # minimize ||q f - z||_2 over constants: q = <z, f>/||f||^2 against f = 1+z
    f = Polynomial([1.0, 1.0])
    r = solve_general(OpaProblem(f=f, degree=0, p=2.0, grid=grid,
                                 target=Polynomial([0.0, 1.0])))
    assert abs(r.coeffs[0] - 0.5) < 1e-8


def test_warm_start_plumbing(grid):
    f = Polynomial([1.0, 0.5])
    exact = solve(f, 1, 4.0, grid=grid)
    seeded = solve(f, 1, 4.0, grid=grid,
                   options=SolverOptions(a_init=exact.coeffs))
    assert seeded.converged
    assert seeded.iterations <= exact.iterations
    np.testing.assert_allclose(seeded.coeffs, exact.coeffs, atol=1e-9)


@pytest.mark.parametrize("p", [3.0, 4.0])
def test_fixed_point_degree0_agrees_with_convex(grid, p):
    f = Polynomial([1.0, -1.0])
    lam, trace = fixed_point_degree0(f, p, grid=grid)
    assert trace.converged
    direct = solve(f, 0, p, grid=grid)
    assert abs(lam - direct.coeffs[0]) < 1e-7
    assert trace.iterations == len(trace.iterates) - 1


def test_fixed_point_degree0_undamped_step_is_stationary(grid):
    f = Polynomial([1.0, -1.0])
    lam, trace = fixed_point_degree0(f, 4.0, grid=grid)
    # one raw step from the limit must not move: Phi(lam) = lam
    lam1, probe = fixed_point_degree0(f, 4.0, lam_init=lam, tol=1e-30,
                                      max_iters=1, grid=grid, damping=0.0)
    assert abs(lam1 - lam) < 1e-8


@pytest.mark.parametrize("p", [3.0, 4.0])
def test_fixed_point_degree1_agrees_with_convex(grid, p):
    f = Polynomial([1.0, 0.5, 0.25])
    (a, b), trace = fixed_point_degree1(f, p, grid=grid)
    assert trace.converged
    direct = solve(f, 1, p, grid=grid)
    np.testing.assert_allclose([a, b], direct.coeffs, atol=1e-7)
    # per-step system integrals are recorded
    assert len(trace.aux_a) == trace.iterations
    assert all(c > 0 for c in trace.aux_c)


def test_fixed_point_flags(grid):
    lam, trace = fixed_point_degree0(Polynomial([1.0, -1.0]), 1.5,
                                     grid=grid, max_iters=50)
    assert "experimental-p<=2" in trace.flags
    f = Rational([1.0], [1.0, -0.5])
    lam2, trace2 = fixed_point_degree0(f, 3.0, grid=grid)
    assert "nonpolynomial-f" in trace2.flags
    assert trace2.converged


def test_fixed_point_rejects_zero_function(grid):
    with pytest.raises(InvalidArgumentError):
        fixed_point_degree0(Polynomial([0.0]), 3.0, grid=grid)
    with pytest.raises(InvalidArgumentError):
        fixed_point_degree1(Polynomial([0.0]), 3.0, grid=grid)


@pytest.mark.parametrize("p", [1.5, 2.5, 4.0])
def test_random_instances_pass_certificate(grid, p):
    rng = np.random.default_rng(17)
    for _ in range(3):
        f = random_poly(rng, max_deg=3)
        n = int(rng.integers(0, 3))
        r = solve(f, n, p, grid=grid)
        assert r.residual_max < 1e-8, (p, n, r.flags)

import numpy as np
import pytest

from pxdg.broken import interpolate, jumps
from pxdg.exponents import ExponentField
from pxdg.functional import FunctionalSpec, eval_discrete
from pxdg.meshes import uniform_mesh
from pxdg.optimize import BfgsConfig, bfgs_minimize, solve_cg, solve_dg

P2 = ExponentField.constant(2.0)


def test_quadratic_termination():
    A = np.diag([1.0, 2.0, 3.0, 4.0, 5.0])
    b = np.ones(5)
    res = bfgs_minimize(lambda x: 0.5 * x @ A @ x - b @ x, lambda x: A @ x - b,
                        np.zeros(5))
    assert res.converged and res.iterations <= 12
    assert np.max(np.abs(res.x - np.linalg.solve(A, b))) < 1e-6


def test_rosenbrock():
    def f(x):
        return (1 - x[0]) ** 2 + 100 * (x[1] - x[0] ** 2) ** 2

    def g(x):
        return np.array([-2 * (1 - x[0]) - 400 * x[0] * (x[1] - x[0] ** 2),
                         200 * (x[1] - x[0] ** 2)])

    res = bfgs_minimize(f, g, np.array([-1.2, 1.0]))
    assert res.converged
    assert np.max(np.abs(res.x - 1.0)) < 1e-6


def test_history_is_monotone():
    rng = np.random.default_rng(0)
    A = rng.normal(size=(8, 8))
    A = A @ A.T + np.eye(8)
    b = rng.normal(size=8)
    res = bfgs_minimize(lambda x: 0.5 * x @ A @ x - b @ x + np.log1p(x @ x),
                        lambda x: A @ x - b + 2 * x / (1 + x @ x),
                        rng.normal(size=8))
    hist = np.array(res.f_history)
    assert np.all(np.diff(hist) <= 0.0)


def test_config_validation():
    with pytest.raises(ValueError):
        BfgsConfig(c1=0.5, c2=0.1)
    with pytest.raises(ValueError):
        BfgsConfig(grad_tol=0.0)


def test_lbfgs_matches_dense_on_quadratic():
    A = np.diag(np.linspace(1, 9, 12))
    b = np.ones(12)
    f = lambda x: 0.5 * x @ A @ x - b @ x
    g = lambda x: A @ x - b
    dense = bfgs_minimize(f, g, np.zeros(12), BfgsConfig())
    lbfgs = bfgs_minimize(f, g, np.zeros(12), BfgsConfig(lbfgs_threshold=1))
    assert np.max(np.abs(dense.x - lbfgs.x)) < 1e-5


def quadratic_problem(B=1.0, n=4):
    mesh = uniform_mesh(-1, 1, n)
    spec = FunctionalSpec(mesh, P2, u_D={"left": -B, "right": B})
    return mesh, spec


def test_p2_dg_sanity():
    B = 1.0
    mesh, spec = quadratic_problem(B)
    rep = solve_dg(spec, 1)
    assert rep.converged
    assert rep.breakdown.total <= 2 * B * B + 1e-12
    assert np.max(np.abs(jumps(rep.solution))) <= 1e-6 * B
    # symmetry: odd solution
    c = rep.solution.coeffs
    assert np.max(np.abs(c + c[::-1, ::-1])) <= 1e-6 * B


def test_p2_cg_is_galerkin_exact():
    B = 2.5
    mesh, spec = quadratic_problem(B, n=6)
    rep = solve_cg(spec, 1)
    want = interpolate(mesh, 1, lambda x: B * x, continuous=True)
    assert np.max(np.abs(rep.solution.coeffs - want.coeffs)) <= 1e-8 * B


def test_restart_from_minimizer_is_immediate():
    mesh, spec = quadratic_problem()
    rep = solve_dg(spec, 1)
    again = solve_dg(spec, 1, BfgsConfig(initial_guess=rep.solution.dof_vector()))
    assert again.iterations <= 2


def test_optimality_gap_against_feasible_candidates():
    mesh = uniform_mesh(-1, 1, 6)
    p = ExponentField.hat_family(0.3, 0.5)
    spec = FunctionalSpec(mesh, p, u_D={"left": -1.0, "right": 1.0})
    rep = solve_dg(spec, 1)
    best = rep.breakdown.total
    for fn in (lambda x: x, lambda x: x**3, lambda x: np.sin(0.5 * np.pi * x)):
        w = interpolate(mesh, 1, fn, continuous=True)
        val = eval_discrete(w, spec).total
        assert best <= val + 1e-8 * (1 + abs(val))


def test_determinism():
    mesh = uniform_mesh(-1, 1, 8)
    p = ExponentField.hat_family(0.2, 0.4)
    spec1 = FunctionalSpec(mesh, p, u_D={"left": -2.0, "right": 2.0})
    spec2 = FunctionalSpec(mesh, p, u_D={"left": -2.0, "right": 2.0})
    r1 = solve_dg(spec1, 1)
    r2 = solve_dg(spec2, 1)
    assert np.array_equal(r1.solution.coeffs, r2.solution.coeffs)
    assert r1.f_history == r2.f_history


def test_scaling_robustness_at_p2():
    B = 1.0
    c = 1e6
    _, spec1 = quadratic_problem(B, n=8)
    _, spec2 = quadratic_problem(c * B, n=8)
    r1 = solve_dg(spec1, 1)
    r2 = solve_dg(spec2, 1)
    assert np.max(np.abs(r2.solution.coeffs - c * r1.solution.coeffs)) <= 1e-6 * c * B


def test_solve_report_fields():
    mesh, spec = quadratic_problem()
    rep = solve_dg(spec, 1)
    assert rep.method == "dg" and rep.wall_time >= 0.0
    assert len(rep.f_history) == len(rep.grad_norm_history)
    lines = rep.trace_csv().strip().split("\n")
    assert lines[0] == "iteration,f,grad_max"
    # success certificate: relative gradient reduction
    assert rep.grad_norm_history[-1] <= 1e-8 * (1.0 + rep.grad_norm_history[0])


def test_zero_initial_guess():
    mesh, spec = quadratic_problem()
    rep = solve_dg(spec, 1, BfgsConfig(initial_guess="zero"))
    assert rep.converged
    assert rep.breakdown.total <= 2.0 + 1e-12

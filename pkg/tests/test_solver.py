import numpy as np
import pytest

from instances import SCALE_EXAMPLE_OPTIMUM, make_scale_example
from symsage.programs import ConicProgram, build_membership_standard, build_scale_program
from symsage.signomials import Signomial
from symsage.solver import SolverConfig, SolveStatus, residuals, solve


def lp_max(objective_coeffs, *, nonneg, eq=(), ineq=()):
    """Tiny LP helper: maximize c'x with hand-written rows."""
    prog = ConicProgram(1)
    for k, nn in enumerate(nonneg):
        prog.add_variable("x%d" % k, nn)
    prog.objective = {i: v for i, v in enumerate(objective_coeffs) if v != 0.0}
    prog.eq_rows = [(dict(row), rhs) for row, rhs in eq]
    prog.ineq_rows = [(dict(row), rhs) for row, rhs in ineq]
    return prog


class TestLinearPrograms:
    def test_bounded_above(self):
        prog = lp_max([1.0], nonneg=[False], ineq=[({0: 1.0}, 3.0)])
        res = solve(prog)
        assert res.status is SolveStatus.OPTIMAL
        assert res.objective == pytest.approx(3.0, abs=1e-7)
        assert res.x_program[0] == pytest.approx(3.0, abs=1e-6)

    def test_equality_pins_variable(self):
        prog = lp_max([1.0], nonneg=[False], eq=[({0: 1.0}, 5.0)])
        res = solve(prog)
        assert res.status is SolveStatus.OPTIMAL
        assert res.objective == pytest.approx(5.0, abs=1e-7)

    def test_two_variable_vertex(self):
        # max x + y st x + 2y <= 4, 3x + y <= 6, x,y >= 0 -> (8/5, 6/5)
        prog = lp_max(
            [1.0, 1.0],
            nonneg=[True, True],
            ineq=[({0: 1.0, 1: 2.0}, 4.0), ({0: 3.0, 1: 1.0}, 6.0)],
        )
        res = solve(prog)
        assert res.status is SolveStatus.OPTIMAL
        assert res.objective == pytest.approx(14.0 / 5.0, abs=1e-7)

    def test_infeasible(self):
        prog = lp_max([1.0], nonneg=[True], eq=[({0: 1.0}, -1.0)])
        res = solve(prog)
        assert res.status is SolveStatus.INFEASIBLE
        assert res.objective is None

    def test_unbounded(self):
        prog = lp_max([1.0], nonneg=[False], ineq=[({0: -1.0}, 1.0)])
        res = solve(prog)
        assert res.status is SolveStatus.UNBOUNDED


class TestEntropyPrograms:
    def test_membership_inside_boundary(self):
        f = Signomial(1, {(1,): 1.0, (-1,): 1.0, (0,): -1.9})
        res = solve(build_membership_standard(f))
        assert res.status is SolveStatus.OPTIMAL

    def test_membership_outside_boundary(self):
        # exp(x) + exp(-x) dips to 2 at the origin, so -2.1 is not coverable
        f = Signomial(1, {(1,): 1.0, (-1,): 1.0, (0,): -2.1})
        res = solve(build_membership_standard(f))
        assert res.status is SolveStatus.INFEASIBLE

    def test_scale_example_value(self):
        f, group = make_scale_example()
        res = solve(build_scale_program(f, group, mode="reduced"))
        assert res.status is SolveStatus.OPTIMAL
        assert res.objective == pytest.approx(SCALE_EXAMPLE_OPTIMUM, abs=1e-7)

    def test_residual_report_on_solution(self):
        f, group = make_scale_example()
        prog = build_scale_program(f, group, mode="reduced")
        res = solve(prog)
        assert res.residuals.max_violation <= 1e-6
        rep = residuals(prog, res.x_program)
        assert rep.max_violation <= 1e-6

    def test_residual_length_check(self):
        f, group = make_scale_example()
        prog = build_scale_program(f, group, mode="reduced")
        with pytest.raises(ValueError):
            residuals(prog, np.zeros(prog.num_variables + 1))


class TestSolverBehaviour:
    def test_deterministic(self):
        f, group = make_scale_example()
        prog = build_scale_program(f, group, mode="reduced")
        r1 = solve(prog)
        r2 = solve(prog)
        assert r1.objective == r2.objective  # bit-for-bit
        assert r1.iterations == r2.iterations
        assert np.array_equal(r1.x, r2.x)

    def test_iteration_limit_status(self):
        f, group = make_scale_example()
        prog = build_scale_program(f, group, mode="reduced")
        res = solve(prog, SolverConfig(max_iterations=2))
        assert res.status is SolveStatus.ITERATION_LIMIT
        assert res.objective is None
        assert "iteration limit" in res.message

    def test_tolerance_config_respected(self):
        f, group = make_scale_example()
        prog = build_scale_program(f, group, mode="reduced")
        loose = solve(prog, SolverConfig(feasibility_tol=1e-6, gap_tol=1e-6))
        tight = solve(prog, SolverConfig(feasibility_tol=1e-10, gap_tol=1e-10))
        assert loose.status is SolveStatus.OPTIMAL
        assert tight.status is SolveStatus.OPTIMAL
        assert tight.gap <= 1e-9
        assert abs(tight.objective - SCALE_EXAMPLE_OPTIMUM) <= 1e-9

    def test_iterations_scale_with_tolerance(self):
        f, group = make_scale_example()
        prog = build_scale_program(f, group, mode="reduced")
        loose = solve(prog, SolverConfig(gap_tol=1e-4))
        tight = solve(prog, SolverConfig(gap_tol=1e-12))
        assert loose.iterations <= tight.iterations

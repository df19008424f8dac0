"""Benchmark harness for the built-in families.

Runs the bound computation for a family across a range of dimensions in
standard and/or reduced mode, checks every built program against the
closed-form size prediction, verifies the extracted certificates, and
renders the results as a human-readable table or JSON lines.  Timing is
split into solver time and total running time; the numbers themselves are
hardware-dependent and only relative comparisons are meaningful.
"""

import json
import time
from dataclasses import dataclass, field

from .certificates import extract_certificate, verify_certificate
from .errors import BuildError, SymsageError
from .families import DEFAULT_FAMILY_CAP, generate_family
from .programs import build_bound_program, canonicalize, predict_program_sizes
from .solver import solve

BOUND_AGREEMENT_TOL = 1e-5


@dataclass
class MethodResult:
    """One mode's outcome on one family instance."""

    mode: str
    variables: int
    constraints: int
    status: str
    bound: float | None
    solve_time: float
    total_time: float
    certificate: str = "skipped"  # pass | fail | skipped

    def to_json_dict(self):
        return {
            "mode": self.mode,
            "variables": self.variables,
            "constraints": self.constraints,
            "status": self.status,
            "bound": self.bound,
            "solve_time": self.solve_time,
            "total_time": self.total_time,
            "certificate": self.certificate,
        }


@dataclass
class BenchmarkRow:
    family: str
    n: int
    results: dict = field(default_factory=dict)  # mode -> MethodResult

    def bound_gap(self):
        """Largest pairwise bound difference among Optimal modes."""
        vals = [r.bound for r in self.results.values()
                if r.status == "Optimal" and r.bound is not None]
        if len(vals) < 2:
            return 0.0
        return max(vals) - min(vals)

    def check_agreement(self, tol=BOUND_AGREEMENT_TOL):
        vals = [r.bound for r in self.results.values()
                if r.status == "Optimal" and r.bound is not None]
        if len(vals) < 2:
            return
        scale = max(1.0, max(abs(v) for v in vals))
        if self.bound_gap() > tol * scale:
            raise SymsageError(
                "%s n=%d: modes disagree by %.3e (tolerance %.1e)"
                % (self.family, self.n, self.bound_gap(), tol * scale)
            )

    def to_json_dict(self):
        return {
            "family": self.family,
            "n": self.n,
            "results": {m: r.to_json_dict() for m, r in sorted(self.results.items())},
        }


def run_instance(f, group, mode, config=None, verify=True):
    """Build, size-check, solve and certify one program; never raises on
    solver trouble, only on size-prediction mismatches."""
    t0 = time.perf_counter()
    if mode == "reduced":
        prog = build_bound_program(f, group=group, mode="reduced")
    else:
        prog = build_bound_program(f, mode="standard")
    built = prog.size_tuple()
    predicted = predict_program_sizes(f, group=group, kind="bound", mode=mode).as_tuple()
    if built != predicted:
        raise BuildError(
            "%s build has size %s but the prediction says %s"
            % (mode, built, predicted)
        )
    can = canonicalize(prog)
    t1 = time.perf_counter()
    try:
        res = solve(can, config)
    except Exception as exc:  # record, don't crash the table
        return MethodResult(
            mode=mode, variables=built[0], constraints=built[1],
            status="Error: %s" % exc, bound=None,
            solve_time=time.perf_counter() - t1,
            total_time=time.perf_counter() - t0,
        )
    solve_time = time.perf_counter() - t1
    out = MethodResult(
        mode=mode, variables=built[0], constraints=built[1],
        status=res.status.value, bound=res.objective,
        solve_time=solve_time, total_time=time.perf_counter() - t0,
    )
    if verify and res.status.value == "Optimal":
        try:
            cert = extract_certificate(res, can)
            report = verify_certificate(f, cert)
            out.certificate = "pass" if report.passed else "fail"
        except Exception:
            out.certificate = "fail"
    return out


def run_benchmark(family, ns, modes=("reduced",), config=None, verify=True,
                  cap=DEFAULT_FAMILY_CAP, check_agreement=True):
    """One BenchmarkRow per dimension, in the order given."""
    rows = []
    for n in ns:
        f, group = generate_family(family, n, cap=cap)
        row = BenchmarkRow(family=family, n=n)
        for mode in modes:
            row.results[mode] = run_instance(f, group, mode, config, verify)
        if check_agreement:
            row.check_agreement()
        rows.append(row)
    return rows


def render_table(rows):
    """The paper-style table: per mode V, C, solver time, total time."""
    if not rows:
        return "(no rows)"
    modes = sorted({m for row in rows for m in row.results})
    header = ["family", "n", "bound"]
    for mode in modes:
        header += ["%s V" % mode, "C", "t_solve", "t_total", "cert"]
    table = [header]
    for row in rows:
        bounds = [r.bound for r in row.results.values() if r.bound is not None]
        cells = [row.family, str(row.n),
                 "%.4f" % bounds[0] if bounds else "-"]
        for mode in modes:
            r = row.results.get(mode)
            if r is None:
                cells += ["-"] * 5
                continue
            cells += [
                str(r.variables), str(r.constraints),
                "%.4f" % r.solve_time, "%.4f" % r.total_time,
                r.certificate if r.status == "Optimal" else r.status,
            ]
        table.append(cells)
    widths = [max(len(line[i]) for line in table) for i in range(len(header))]
    out = []
    for k, line in enumerate(table):
        out.append("  ".join(cell.rjust(w) for cell, w in zip(line, widths)))
        if k == 0:
            out.append("-" * len(out[0]))
    return "\n".join(out)


def rows_to_jsonl(rows):
    """One JSON object per line; identical across runs except the timings."""
    return "\n".join(
        json.dumps(row.to_json_dict(), sort_keys=True) for row in rows
    )

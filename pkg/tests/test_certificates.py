import copy
import random

import pytest

from instances import (
    SCALE_EXAMPLE_OPTIMUM,
    make_hyperbolic_example,
    make_scale_example,
)
from symsage.certificates import (
    ReducedCertificate,
    expand_certificate,
    extract_certificate,
    verify_certificate,
)
from symsage.errors import CertificateError, OrbitBudgetError, SchemaError
from symsage.families import generate_family
from symsage.groups import PermutationGroup
from symsage.programs import (
    ConicProgram,
    SupportRegion,
    build_bound_program,
    build_membership_reduced,
    build_membership_standard,
    build_scale_program,
    canonicalize,
)
from symsage.signomials import Signomial
from symsage.solver import SolverConfig, solve


def solve_and_extract(prog):
    res = solve(prog)
    assert res.status.value == "Optimal"
    return res, extract_certificate(res, prog)


def inflate(cert, amount=0.01):
    return ReducedCertificate(
        cert.kind,
        cert.mode,
        cert.dimension,
        cert.group,
        cert.objective + amount,
        cert.blocks,
        cert.a_side,
    )


def max_deviation(f, g):
    keys = set(f.terms) | set(g.terms)
    return max(abs(f.terms.get(e, 0.0) - g.terms.get(e, 0.0)) for e in keys)


class TestScaleCertificates:
    @pytest.mark.parametrize("mode", ["reduced", "standard"])
    def test_round_trip(self, mode):
        f, group = make_scale_example()
        prog = build_scale_program(f, group if mode == "reduced" else None, mode=mode)
        res, cert = solve_and_extract(prog)
        assert cert.kind == "scale" and cert.mode == mode
        assert cert.objective == pytest.approx(SCALE_EXAMPLE_OPTIMUM, abs=1e-6)
        report = verify_certificate(f, cert, tol=1e-6)
        assert report.passed, report.summary()
        assert not verify_certificate(f, inflate(cert), tol=1e-6).passed

    def test_known_witness_values(self):
        f, group = make_scale_example()
        _, cert = solve_and_extract(build_scale_program(f, group, mode="reduced"))
        blk = cert.blocks[0]
        assert blk.beta == (2, 2, 1)
        values = {cls.rep: cls.c for cls in blk.classes}
        assert values[(0, 0, 6)] == pytest.approx(1.0 / 6.0, abs=1e-4)
        assert values[(1, 1, 1)] == pytest.approx(1.0 / 3.0, abs=1e-4)
        assert values[(6, 0, 0)] == pytest.approx(5.0 / 12.0, abs=1e-4)
        sizes = {cls.rep: cls.size for cls in blk.classes}
        assert sizes == {(0, 0, 6): 1, (1, 1, 1): 1, (6, 0, 0): 2}

    def test_expansion_reconstructs_scaled_target(self):
        f, group = make_scale_example()
        _, cert = solve_and_extract(build_scale_program(f, group, mode="reduced"))
        total = expand_certificate(cert).total()
        target = {}
        for e, c in f.terms.items():
            target[e] = c if c > 0 else cert.objective * c
        assert max_deviation(total, Signomial(3, target)) <= 1e-6


class TestBoundCertificates:
    @pytest.mark.parametrize(
        "route", ["reduced", "standard", "trivial"]
    )
    def test_round_trip_and_expansion(self, route):
        f, group = generate_family("f1", 3)
        if route == "reduced":
            prog = build_bound_program(f, group, mode="reduced")
        elif route == "standard":
            prog = build_bound_program(f, mode="standard")
        else:
            prog = build_bound_program(
                f, PermutationGroup.trivial(3), mode="reduced"
            )
        res, cert = solve_and_extract(prog)
        report = verify_certificate(f, cert, tol=1e-6)
        assert report.passed, report.summary()
        assert report.reconstruction is not None and report.reconstruction <= 1e-6
        # the expansion sums to f - lambda
        total = expand_certificate(cert).total()
        target = dict(f.terms)
        origin = (0, 0, 0)
        target[origin] = target.get(origin, 0.0) - cert.objective
        assert max_deviation(total, Signomial(3, target)) <= 1e-6
        assert not verify_certificate(f, inflate(cert), tol=1e-6).passed

    def test_negative_origin_route(self):
        f = make_hyperbolic_example()
        _, cert = solve_and_extract(build_bound_program(f, mode="standard"))
        assert cert.objective == pytest.approx(0.0, abs=1e-7)
        blk = [b for b in cert.blocks if b.beta == (0,)]
        assert len(blk) == 1 and blk[0].shifted
        report = verify_certificate(f, cert, tol=1e-6)
        assert report.passed, report.summary()
        assert not verify_certificate(f, inflate(cert), tol=1e-6).passed

    def test_parts_are_pointwise_nonnegative(self):
        f, group = generate_family("f1", 3)
        _, cert = solve_and_extract(build_bound_program(f, group, mode="reduced"))
        dec = expand_certificate(cert)
        assert len(dec.parts) == len(dec.betas)
        rng = random.Random(41)
        for part in dec.parts:
            for _ in range(5):
                x = [rng.uniform(-2.0, 2.0) for _ in range(3)]
                assert part(x) >= -1e-7


class TestMembershipCertificates:
    def test_member_with_margin(self):
        f, group = generate_family("f1", 3)
        res = solve(build_bound_program(f, group, mode="reduced"))
        lam = res.objective
        shifted = f + Signomial(3, {(0, 0, 0): -lam + 1e-3})
        for prog in (
            build_membership_reduced(shifted, group),
            build_membership_standard(shifted),
        ):
            _, cert = solve_and_extract(prog)
            assert cert.kind == "membership"
            assert cert.objective is None
            report = verify_certificate(shifted, cert, tol=1e-6)
            assert report.passed, report.summary()
            # membership expansion reconstructs the signomial itself
            total = expand_certificate(cert).total()
            assert max_deviation(total, shifted) <= 1e-6

    def test_posynomial_certificate(self):
        f = Signomial(2, {(1, 0): 1.0, (0, 1): 2.0})
        _, cert = solve_and_extract(build_membership_standard(f))
        assert cert.blocks == []
        assert verify_certificate(f, cert, tol=1e-6).passed
        # the same empty certificate cannot cover a negative term
        g = Signomial(2, {(1, 0): 1.0, (0, 1): 2.0, (1, 1): -0.5})
        report = verify_certificate(g, cert, tol=1e-6)
        assert not report.passed


class TestCertificateJson:
    def test_round_trip_preserves_verification(self):
        f, group = make_scale_example()
        _, cert = solve_and_extract(build_scale_program(f, group, mode="reduced"))
        clone = ReducedCertificate.loads(cert.dumps())
        assert clone.dumps() == cert.dumps()
        assert verify_certificate(f, clone, tol=1e-6).passed

    def test_round_trip_generated_group(self):
        f, _ = make_scale_example()
        gens = PermutationGroup.symmetric(3).generators()
        group = PermutationGroup.from_generators(gens, 3)
        _, cert = solve_and_extract(build_scale_program(f, group, mode="reduced"))
        clone = ReducedCertificate.loads(cert.dumps())
        assert verify_certificate(f, clone, tol=1e-6).passed

    def test_schema_errors(self):
        f, group = make_scale_example()
        _, cert = solve_and_extract(build_scale_program(f, group, mode="reduced"))
        doc = cert.to_json_dict()
        with pytest.raises(SchemaError):
            ReducedCertificate.loads("{not json")
        bad = dict(doc)
        bad["format"] = "something-else"
        with pytest.raises(SchemaError):
            ReducedCertificate.from_json_dict(bad)
        bad = dict(doc)
        bad["version"] = 99
        with pytest.raises(SchemaError):
            ReducedCertificate.from_json_dict(bad)
        bad = dict(doc)
        del bad["kind"]
        with pytest.raises(SchemaError):
            ReducedCertificate.from_json_dict(bad)
        bad = copy.deepcopy(doc)
        bad["blocks"][0]["beta"] = [1, 2]  # wrong length
        with pytest.raises(SchemaError):
            ReducedCertificate.from_json_dict(bad)


class TestExtractionGuards:
    def test_non_optimal_result_rejected(self):
        f, group = make_scale_example()
        prog = build_scale_program(f, group, mode="reduced")
        res = solve(prog, SolverConfig(max_iterations=2))
        assert res.status.value == "IterationLimit"
        with pytest.raises(CertificateError):
            extract_certificate(res, prog)

    def test_box_region_rejected(self):
        f = Signomial(1, {(0,): 3.0, (1,): -1.0})
        prog = build_bound_program(
            f, mode="standard", region=SupportRegion.box([-1.0], [1.0])
        )
        res = solve(prog)
        assert res.status.value == "Optimal"
        with pytest.raises(CertificateError):
            extract_certificate(res, prog)

    def test_structureless_program_rejected(self):
        prog = ConicProgram(1)
        prog.add_variable("x", nonneg=False)
        prog.objective = {0: 1.0}
        prog.ineq_rows.append(({0: 1.0}, 1.0))
        res = solve(prog)
        with pytest.raises(CertificateError):
            extract_certificate(res, canonicalize(prog))

    def test_canonical_program_accepted(self):
        # the caller may hold only the canonical form the solver consumed
        f, group = make_scale_example()
        can = canonicalize(build_scale_program(f, group, mode="reduced"))
        res = solve(can)
        cert = extract_certificate(res, can)
        assert verify_certificate(f, cert, tol=1e-6).passed


class TestTamperedCertificates:
    def make_cert(self):
        f, group = make_scale_example()
        _, cert = solve_and_extract(build_scale_program(f, group, mode="reduced"))
        return f, cert

    def test_budget_violation_detected(self):
        f, cert = self.make_cert()
        bad = copy.deepcopy(cert)
        bad.blocks[0].classes[0].c += 0.05
        report = verify_certificate(f, bad, tol=1e-6)
        assert not report.passed
        assert report.budget > 1e-6 or report.reconstruction > 1e-6

    def test_balance_violation_detected(self):
        f, cert = self.make_cert()
        bad = copy.deepcopy(cert)
        target = [c for c in bad.blocks[0].classes if c.rep == (1, 1, 1)][0]
        target.nu += 0.1
        report = verify_certificate(f, bad, tol=1e-6)
        assert not report.passed
        assert report.balance > 1e-6

    def test_entropy_violation_detected(self):
        f, cert = self.make_cert()
        bad = copy.deepcopy(cert)
        for cls in bad.blocks[0].classes:
            cls.nu *= 1.5  # preserves balance, breaks the entropy budget
        report = verify_certificate(f, bad, tol=1e-6)
        assert not report.passed
        assert report.entropy > 1e-6

    def test_non_representative_beta_detected(self):
        f, cert = self.make_cert()
        bad = copy.deepcopy(cert)
        bad.blocks[0].beta = (1, 2, 2)  # same orbit, not the representative
        report = verify_certificate(f, bad, tol=1e-6)
        assert not report.passed
        assert report.problems

    def test_missing_block_detected(self):
        f, cert = self.make_cert()
        bad = copy.deepcopy(cert)
        bad.blocks = []
        report = verify_certificate(f, bad, tol=1e-6)
        assert not report.passed

    def test_dimension_mismatch_detected(self):
        f, cert = self.make_cert()
        g = Signomial(2, {(1, 0): 1.0, (1, 1): -0.5})
        report = verify_certificate(g, cert, tol=1e-6)
        assert not report.passed
        assert report.problems


class TestExpansionBudget:
    def test_budget_enforced(self):
        f, group = make_scale_example()
        _, cert = solve_and_extract(build_scale_program(f, group, mode="reduced"))
        with pytest.raises(OrbitBudgetError):
            expand_certificate(cert, budget=1)

import json
import math

import pytest

from instances import make_axis_example, make_scale_example
from symsage.cli import main
from symsage.families import generate_family
from symsage.programs import parse_program_json
from symsage.signomials import Signomial
from symsage.solver import solve


def write_signomial(path, f):
    path.write_text(json.dumps(f.to_json_dict()))
    return str(path)


@pytest.fixture
def scale_file(tmp_path):
    f, _ = make_scale_example()
    return write_signomial(tmp_path / "scale.json", f)


@pytest.fixture
def axis_file(tmp_path):
    f, _ = make_axis_example()
    return write_signomial(tmp_path / "axis.json", f)


@pytest.fixture
def f1_file(tmp_path):
    f, _ = generate_family("f1", 3)
    return write_signomial(tmp_path / "f1n3.json", f)


class TestBoundCommand:
    def test_scale_objective_both_modes(self, scale_file, capsys):
        code = main(["bound", scale_file, "--sym", "--both", "--maximize-coefficient"])
        out = capsys.readouterr().out
        assert code == 0
        assert "standard: delta = 1.310370" in out
        assert "reduced: delta = 1.310370" in out
        assert "(V=7, C=5)" in out and "(V=25, C=16)" in out

    def test_bound_json_report(self, f1_file, capsys):
        code = main(["bound", f1_file, "--sym", "--json"])
        out = capsys.readouterr().out
        assert code == 0
        report = json.loads(out.splitlines()[-1])
        assert report["reduced"]["status"] == "Optimal"
        assert report["reduced"]["variables"] == 5
        assert abs(report["reduced"]["objective"] - (-0.1250 * 3)) < 3  # sanity only

    def test_certificate_out_then_verify(self, f1_file, tmp_path, capsys):
        cert_path = tmp_path / "cert.json"
        assert main(["bound", f1_file, "--sym", "--certificate-out", str(cert_path)]) == 0
        capsys.readouterr()
        assert main(["verify", f1_file, str(cert_path)]) == 0
        out = capsys.readouterr().out
        assert "pass" in out
        # inflate the claimed objective: verification must now fail ...
        doc = json.loads(cert_path.read_text())
        doc["objective"] += 0.001
        bad_path = tmp_path / "bad.json"
        bad_path.write_text(json.dumps(doc))
        assert main(["verify", f1_file, str(bad_path)]) == 1
        capsys.readouterr()
        # ... unless the caller loosens the tolerance that far
        assert main(["verify", f1_file, str(bad_path), "--tol", "0.05"]) == 0

    def test_certificate_out_rejects_both(self, f1_file, tmp_path):
        code = main([
            "bound", f1_file, "--sym", "--both",
            "--certificate-out", str(tmp_path / "c.json"),
        ])
        assert code == 2

    def test_box_bound(self, tmp_path, capsys):
        f = Signomial(1, {(0,): 3.0, (1,): -1.0})
        sig = write_signomial(tmp_path / "exp.json", f)
        code = main(["bound", sig, "--box", "-1", "1"])
        out = capsys.readouterr().out
        assert code == 0
        value = float(out.split("=")[1].split("(")[0])
        assert value == pytest.approx(3.0 - math.e, abs=1e-6)


class TestMemberCommand:
    def test_posynomial_short_circuit(self, tmp_path, capsys):
        sig = write_signomial(tmp_path / "posy.json", Signomial(2, {(1, 0): 1.0, (0, 1): 1.0}))
        assert main(["member", sig]) == 0
        assert "no negative coefficients" in capsys.readouterr().out

    def test_member_yes(self, tmp_path, capsys):
        f = Signomial(1, {(1,): 1.0, (-1,): 1.0, (0,): -1.9})
        sig = write_signomial(tmp_path / "m.json", f)
        assert main(["member", sig]) == 0
        assert "member: yes" in capsys.readouterr().out

    def test_member_no(self, tmp_path, capsys):
        f = Signomial(1, {(1,): 1.0, (-1,): 1.0, (0,): -2.1})
        sig = write_signomial(tmp_path / "m.json", f)
        assert main(["member", sig]) == 1
        assert "member: no" in capsys.readouterr().out

    def test_member_reduced(self, f1_file, capsys):
        # f1 itself dips negative, so it is not in the cone
        assert main(["member", f1_file, "--sym"]) == 1
        assert "member: no" in capsys.readouterr().out


class TestSizesCommand:
    def test_membership_sizes_without_solving(self, axis_file, capsys):
        code = main(["sizes", axis_file, "--sym", "--both"])
        out = capsys.readouterr().out
        assert code == 0
        assert "standard: V=32, C=20" in out
        assert "reduced: V=10, C=7" in out

    def test_json_output(self, scale_file, capsys):
        code = main(["sizes", scale_file, "--sym", "--kind", "scale", "--json"])
        out = capsys.readouterr().out
        assert code == 0
        doc = json.loads(out.splitlines()[-1])
        assert doc["sizes"]["reduced"] == {"variables": 7, "constraints": 5}


class TestBenchCommand:
    def test_table(self, capsys):
        assert main(["bench", "f1", "--n", "2..3"]) == 0
        out = capsys.readouterr().out
        assert "f1" in out and "family" in out

    def test_jsonl(self, capsys):
        assert main(["bench", "f2", "--n", "2", "--jsonl", "--no-verify"]) == 0
        lines = [l for l in capsys.readouterr().out.splitlines() if l.strip()]
        doc = json.loads(lines[0])
        assert doc["family"] == "f2" and doc["n"] == 2
        assert doc["results"]["reduced"]["certificate"] == "skipped"

    def test_bad_range(self, capsys):
        assert main(["bench", "f1", "--n", "two"]) == 2

    def test_cap_guard(self, capsys):
        assert main(["bench", "f1", "--n", "9"]) == 2


class TestSymmetrizeCommand:
    def test_writes_invariant_average(self, tmp_path, capsys):
        f = Signomial(2, {(2, 0): 4.0})
        sig = write_signomial(tmp_path / "in.json", f)
        out_path = tmp_path / "out.json"
        assert main(["symmetrize", sig, "--sym", "--out", str(out_path)]) == 0
        result = Signomial.from_json_dict(json.loads(out_path.read_text()))
        assert result.terms == {(2, 0): 2.0, (0, 2): 2.0}

    def test_requires_group(self, tmp_path):
        sig = write_signomial(tmp_path / "in.json", Signomial(2, {(2, 0): 4.0}))
        assert main(["symmetrize", sig]) == 2


class TestExportCommand:
    def test_export_solves_to_same_value(self, scale_file, tmp_path, capsys):
        out_path = tmp_path / "prog.json"
        code = main([
            "export", scale_file, "--sym", "--kind", "scale", "--out", str(out_path),
        ])
        assert code == 0
        can = parse_program_json(json.loads(out_path.read_text()))
        res = solve(can)
        assert res.status.value == "Optimal"
        assert res.objective == pytest.approx((9.0 / 4.0) ** (1.0 / 3.0), abs=1e-6)

    def test_export_rejects_both(self, scale_file):
        assert main(["export", scale_file, "--sym", "--both"]) == 2


class TestUsageAndEnvironment:
    def test_no_arguments(self):
        assert main([]) == 2

    def test_unknown_command(self):
        assert main(["optimize"]) == 2

    def test_missing_file(self, capsys):
        assert main(["bound", "/nonexistent/f.json"]) == 2

    def test_sym_and_group_conflict(self, scale_file, tmp_path):
        group_path = tmp_path / "g.json"
        group_path.write_text(json.dumps({"degree": 3, "kind": "symmetric"}))
        code = main(["bound", scale_file, "--sym", "--group", str(group_path)])
        assert code == 2

    def test_group_file(self, scale_file, tmp_path, capsys):
        group_path = tmp_path / "g.json"
        group_path.write_text(json.dumps({"degree": 3, "kind": "symmetric"}))
        code = main(["bound", scale_file, "--group", str(group_path),
                     "--maximize-coefficient"])
        assert code == 0
        assert "reduced: delta = 1.310370" in capsys.readouterr().out

    def test_group_degree_mismatch(self, scale_file, tmp_path):
        group_path = tmp_path / "g.json"
        group_path.write_text(json.dumps({"degree": 2, "kind": "symmetric"}))
        assert main(["bound", scale_file, "--group", str(group_path)]) == 2

    def test_reduced_without_group(self, scale_file):
        assert main(["bound", scale_file, "--reduced"]) == 2

    def test_conflicting_modes(self, scale_file):
        assert main(["bound", scale_file, "--sym", "--standard", "--reduced"]) == 2

    def test_env_tolerance_override(self, f1_file, monkeypatch, capsys):
        monkeypatch.setenv("SYMSAGE_FEASTOL", "1e-6")
        monkeypatch.setenv("SYMSAGE_GAPTOL", "1e-6")
        assert main(["bound", f1_file, "--sym"]) == 0

    def test_env_tolerance_invalid(self, f1_file, monkeypatch, capsys):
        monkeypatch.setenv("SYMSAGE_GAPTOL", "not-a-float")
        assert main(["bound", f1_file, "--sym"]) == 2

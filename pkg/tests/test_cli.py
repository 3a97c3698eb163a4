import io
import json
import subprocess
import sys
from pathlib import Path

import pytest

from pdt import cli

FIXTURES = Path(__file__).parent / "fixtures"
EXPECTED_EXIT = {"codim2_dim4": 1}

FIXTURE_COMMAND = {
    "gauss_gram": "signature",
    "classify_type3": "classify-subspace",
    "eigenspace_gauss": "eigenspace",
    "monodromy_case2": "monodromy-log",
    "monodromy_case3": "weight-filtration",
    "monodromy_quasi_unipotent": "monodromy-log",
    "samples_case2": "limit-period",
    "samples_case3": "limit-period",
    "orthogonality": "check-orthogonality",
    "psi": "psi-verify",
    "arrangement_k1": "arrangement-k1",
    "cone_cells": "cone-cells",
    "strata_poset": "strata-poset",
    "codim2_dim4": "codim2-check",
    "codim2_pass": "codim2-check",
    "enumerate_u": "enumerate-isotropic",
    "boundary_type": "boundary-type",
    "k3_type": "k3-type",
    "kulikov_smooth": "kulikov",
    "kulikov_chain": "kulikov",
    "kulikov_sphere": "kulikov",
    "tube_integral": "tube-integral",
    "ball_strata": "ball-strata",
}

# library operations as listed per module; run and batch are the cli's own
LIBRARY_OPS = """
signature radical orthogonal_complement classify_subspace eigenspace_chi subspace_sum
log_unipotent classify_nilpotent one_param weight_filtration
in_domain same_component hodge_norm untwist limit_line check_limit_orthogonality tube_coords psi_tau psi_ef limit_mhs
build_K1 K_J_plane cone_decomposition K_sigma strata_poset codim2_criterion ball_strata enumerate_isotropic invar_hypothesis
boundary_pair_type k3_degeneration_type kulikov_classify gauss_lattice_report tube_integral_check
""".split()


def invoke(capsys, *argv):
    code = cli.main(list(argv))
    return code, capsys.readouterr().out


def test_every_fixture_has_a_command():
    assert {p.stem for p in FIXTURES.glob("*.json")} == set(FIXTURE_COMMAND)


@pytest.mark.parametrize("name", sorted(FIXTURE_COMMAND))
def test_fixture_exit_codes(capsys, name):
    code, out = invoke(capsys, FIXTURE_COMMAND[name], str(FIXTURES / f"{name}.json"))
    report = json.loads(out)
    assert code == EXPECTED_EXIT.get(name, 0), report["diagnostics"]
    assert report["command"] == FIXTURE_COMMAND[name]
    assert report["version"] == cli.__version__


def test_signature_on_gauss(capsys):
    code, out = invoke(capsys, "signature", str(FIXTURES / "gauss_gram.json"))
    assert code == 0 and json.loads(out)["payload"] == {"p": 0, "q": 2, "r": 0}


def test_kulikov_chain(capsys):
    code, out = invoke(capsys, "kulikov", str(FIXTURES / "kulikov_chain.json"))
    assert code == 0 and json.loads(out)["payload"] == {"type": 2}


def test_codim2_dim4_fails(capsys):
    code, out = invoke(capsys, "codim2-check", str(FIXTURES / "codim2_dim4.json"))
    assert code == 1 and json.loads(out)["status"] == "fail"


@pytest.mark.parametrize("name", ["cone_cells", "strata_poset", "samples_case3", "psi"])
def test_byte_identical(capsys, name):
    path = str(FIXTURES / f"{name}.json")
    outs = {invoke(capsys, FIXTURE_COMMAND[name], path, "--seed", "5")[1] for _ in range(3)}
    assert len(outs) == 1


def test_seed_changes_nothing_but_witnesses(capsys):
    path = str(FIXTURES / "cone_cells.json")
    a = json.loads(invoke(capsys, "cone-cells", path, "--seed", "0")[1])
    b = json.loads(invoke(capsys, "cone-cells", path, "--seed", "9")[1])
    strip = lambda r: [(c["signs"], c["dim"]) for c in r["payload"]["cells"]]
    assert strip(a) == strip(b)


def test_dispatch_covers_each_op_once():
    seen = [op for c in cli.COMMANDS.values() for op in c.ops]
    assert len(seen) == len(set(seen))
    assert set(LIBRARY_OPS) <= set(seen)


def test_command_names():
    assert len(cli.COMMANDS) == 21


def test_unknown_command(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["frobnicate", "x.json"])
    assert exc.value.code != 0


def test_unknown_command_via_run():
    assert cli.run("frobnicate", {})["status"] == "error"


def test_malformed_json(tmp_path, capsys):
    p = tmp_path / "bad.json"
    p.write_text('{"gram": [[1, 0],\n [0, 1]')
    code, out = invoke(capsys, "signature", str(p))
    report = json.loads(out)
    assert code == 2 and "line 2" in report["diagnostics"][0]


def test_schema_error_names_field(tmp_path, capsys):
    p = tmp_path / "bad.json"
    p.write_text(json.dumps({"space": {"gram": [[1, 0], [0, "x"]]}}))
    code, out = invoke(capsys, "signature", str(p))
    assert code == 2 and "$.space.gram[1][1]" in json.loads(out)["diagnostics"][0]


def test_missing_field(tmp_path, capsys):
    p = tmp_path / "bad.json"
    p.write_text(json.dumps({"components": ["K3"], "dual_complex": "Point"}))
    code, out = invoke(capsys, "kulikov", str(p))
    assert code == 2 and "double_curves" in json.loads(out)["diagnostics"][0]


def test_missing_input_file(capsys):
    code, _ = invoke(capsys, "signature")
    assert code == 2


def test_text_output(capsys):
    code, out = invoke(capsys, "kulikov", str(FIXTURES / "kulikov_chain.json"), "--text")
    assert code == 0 and out.startswith("kulikov: ok") and "type: 2" in out


def test_stdin(monkeypatch, capsys):
    monkeypatch.setattr(sys, "stdin", io.StringIO((FIXTURES / "gauss_gram.json").read_text()))
    code, out = invoke(capsys, "signature", "-")
    assert code == 0 and json.loads(out)["payload"]["q"] == 2


def test_commands_without_input(capsys):
    assert invoke(capsys, "gauss-lattice")[0] == 0


class TestBatch:
    def write(self, tmp_path, entries):
        m = tmp_path / "manifest.json"
        m.write_text(json.dumps({"entries": entries}))
        return str(m)

    def test_empty(self, tmp_path, capsys):
        code, out = invoke(capsys, "batch", self.write(tmp_path, []))
        report = json.loads(out)
        assert code == 0 and report["payload"]["entries"] == []

    def test_kulikov_fixtures(self, tmp_path, capsys):
        entries = [{"command": "kulikov", "input": str(FIXTURES / f"kulikov_{n}.json")} for n in ("smooth", "chain", "sphere")]
        code, out = invoke(capsys, "batch", self.write(tmp_path, entries), "--workers", "3")
        report = json.loads(out)
        assert code == 0
        assert [e["payload"]["type"] for e in report["payload"]["entries"]] == [1, 2, 3]

    def test_one_malformed(self, tmp_path, capsys):
        (tmp_path / "bad.json").write_text("{")
        entries = [
            {"command": "kulikov", "input": str(FIXTURES / "kulikov_smooth.json")},
            {"command": "kulikov", "input": "bad.json"},
            {"command": "kulikov", "input": str(FIXTURES / "kulikov_sphere.json")},
        ]
        code, out = invoke(capsys, "batch", self.write(tmp_path, entries))
        report = json.loads(out)
        assert code == 2
        assert [e["status"] for e in report["payload"]["entries"]] == ["ok", "error", "ok"]
        assert report["payload"]["counts"] == {"ok": 2, "fail": 0, "error": 1}

    def test_inline_input(self, tmp_path, capsys):
        entries = [{"command": "boundary-type", "input": {"weight_of_F": 1}}]
        code, out = invoke(capsys, "batch", self.write(tmp_path, entries))
        assert code == 0


def test_module_entry_point():
    r = subprocess.run(
        [sys.executable, "-m", "pdt", "signature", str(FIXTURES / "gauss_gram.json")], capture_output=True, text=True
    )
    assert r.returncode == 0 and json.loads(r.stdout)["status"] == "ok"

import json

import numpy as np
import pytest

from qps import cli, fano
from qps.algebra import WeylMonomial
from qps.representation import Family


@pytest.fixture
def state_file(tmp_path):
    path = tmp_path / "s.json"
    path.write_text(json.dumps({"dim": 4, "kind": "pure", "data": [[1, 0], [0, 0], [0, 0], [0, 0]]}))
    return path


def run(argv, capsys):
    code = cli.main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


class TestParse:
    def test_wigner(self, state_file):
        cfg = cli.parse_args(["wigner", "--dim", "4", "--family", "new", "--state", str(state_file), "--out", "csv"])
        assert (cfg.command, cfg.dim, cfg.family, cfg.out) == ("wigner", 4, Family.NEW, "csv")

    def test_verify(self):
        cfg = cli.parse_args(["verify", "--dim", "2", "--suite", "all", "--tol", "1e-10"])
        assert cfg.tol == 1e-10 and cfg.options.suite == ["all"]

    def test_leonhardt_odd_rejected(self, capsys):
        with pytest.raises(SystemExit) as exc:
            cli.parse_args(["fano", "--dim", "3", "--family", "leonhardt"])
        assert exc.value.code == 2
        assert "even" in capsys.readouterr().err

    @pytest.mark.parametrize("argv", [
        ["bogus", "--dim", "2"],
        ["fano", "--dim", "2", "--frobnicate"],
        ["fano", "--dim", "4", "--family", "new", "--nplus", "2", "--nminus", "2"],
        ["fano", "--dim", "4", "--nplus", "1", "--nminus", "0"],
        ["fano", "--dim", "4", "--nplus", "1"],
        ["moments", "--dim", "2", "--a", "5"],
        ["rep", "--dim", "2", "--h", "1,2,3"],
    ])
    def test_usage_errors(self, argv):
        with pytest.raises(SystemExit) as exc:
            cli.parse_args(argv)
        assert exc.value.code == 2

    def test_family_from_phase_choice(self):
        cfg = cli.parse_args(["moments", "--dim", "4", "--nplus", "6", "--nminus", "2"])
        assert cfg.family is Family.LEONHARDT

    def test_default_family_is_new(self):
        cfg = cli.parse_args(["fano", "--dim", "4"])
        assert cfg.family is Family.NEW and (cfg.n_plus, cfg.n_minus) == (0, 0)

    def test_env_tolerance(self, monkeypatch):
        monkeypatch.setenv("QPS_TOLERANCE", "1e-7")
        assert cli.parse_args(["verify", "--dim", "2"]).tol == 1e-7
        assert cli.parse_args(["verify", "--dim", "2", "--tol", "1e-9"]).tol == 1e-9


class TestExecute:
    @pytest.mark.parametrize("N", [2, 3, 4, 5, 6])
    def test_verify_all_passes(self, N, capsys):
        code, out, _ = run(["verify", "--dim", str(N), "--suite", "all"], capsys)
        assert code == 0, out
        assert "FAIL" not in out

    def test_verify_marginality(self, capsys):
        code, out, _ = run(["verify", "--dim", "2", "--suite", "marginality", "--out", "json"], capsys)
        doc = json.loads(out)
        assert code == 0 and doc["passed"]
        assert all(c["deviation"] < 1e-12 for c in doc["checks"])

    def test_mutated_phase_fails_verify(self, capsys, monkeypatch):
        original = fano.closed_form_monomial

        def mutated(point, family, N):
            mono = original(point, family, N)
            return mono.scaled(1) if point == (1, 1) else mono

        monkeypatch.setattr(fano, "closed_form_monomial", mutated)
        code, out, _ = run(["verify", "--dim", "2", "--suite", "all"], capsys)
        assert code == 1
        assert "FAIL" in out

    def test_rep(self, capsys):
        code, out, _ = run(["rep", "--dim", "2", "--h", "1,0,1,1", "--nplus", "0", "--nminus", "0", "--out", "json"], capsys)
        doc = json.loads(out)
        assert code == 0
        assert max(doc["residuals"].values()) < 1e-10
        U = np.array([complex(*z) for z in doc["matrix"]]).reshape(2, 2)
        assert np.abs(U @ U.conj().T - np.eye(2)).max() < 1e-10

    def test_rep_csv_inadmissible_allowed(self, capsys):
        code, out, err = run(["rep", "--dim", "4", "--h", "2,1,1,1", "--nplus", "1", "--nminus", "0"], capsys)
        assert code == 0
        assert out.splitlines()[0] == "row,col,re,im" and len(out.splitlines()) == 17
        assert "unitarity residual" in err

    def test_rep_not_unimodular(self, capsys):
        code, _, err = run(["rep", "--dim", "2", "--h", "2,0,0,2"], capsys)
        assert code == 1
        assert "det h = 1" in err

    def test_moments(self, capsys):
        code, out, _ = run(["moments", "--dim", "4", "--family", "leonhardt", "--a", "1", "--b", "2"], capsys)
        lines = out.splitlines()
        assert code == 0 and lines[0] == "a,b,deviation"
        assert float(lines[1].split(",")[2]) < 1e-10

    def test_wigner_csv(self, state_file, capsys):
        code, out, _ = run(["wigner", "--dim", "4", "--state", str(state_file)], capsys)
        lines = out.splitlines()
        assert code == 0 and lines[0] == "dq,dp,q,p,w" and len(lines) == 65
        total = sum(float(line.split(",")[4]) for line in lines[1:])
        assert total == pytest.approx(1, abs=1e-9)

    def test_wigner_json_to_file(self, state_file, tmp_path, capsys):
        target = tmp_path / "w.json"
        code, out, _ = run(["wigner", "--dim", "4", "--family", "leonhardt", "--state", str(state_file),
                            "--out", "json", "--output", str(target)], capsys)
        assert code == 0 and out == ""
        doc = json.loads(target.read_text())
        assert doc["dim"] == 4 and doc["family"] == "leonhardt" and len(doc["values"]) == 64

    def test_missing_state_file(self, tmp_path, capsys):
        code, _, err = run(["wigner", "--dim", "2", "--state", str(tmp_path / "none.json")], capsys)
        assert code == 3 and err.startswith("qps: error")

    def test_state_dimension_mismatch(self, state_file, capsys):
        code, _, _ = run(["wigner", "--dim", "2", "--state", str(state_file)], capsys)
        assert code == 3

    def test_fano_point(self, capsys):
        code, out, _ = run(["fano", "--dim", "2", "--point", "1,2", "--out", "json"], capsys)
        doc = json.loads(out)
        assert code == 0 and len(doc["cells"]) == 1
        assert (doc["cells"][0]["dq"], doc["cells"][0]["dp"]) == (1, 2)

    def test_fano_full_csv(self, capsys):
        code, out, _ = run(["fano", "--dim", "3"], capsys)
        assert code == 0 and len(out.splitlines()) == 1 + 36 * 9

    def test_byte_deterministic(self, state_file, capsys):
        argv = ["wigner", "--dim", "4", "--state", str(state_file), "--seed", "3"]
        _, first, _ = run(argv, capsys)
        _, second, _ = run(argv, capsys)
        assert first == second
        _, v1, _ = run(["verify", "--dim", "3", "--seed", "5"], capsys)
        _, v2, _ = run(["verify", "--dim", "3", "--seed", "5"], capsys)
        assert v1 == v2

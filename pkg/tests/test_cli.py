import json

import pytest

import faultscope as fs
from faultscope.cli import EXIT_OK, EXIT_USAGE, EXIT_VALIDATION, EXIT_VERIFY, main

from conftest import read_fixture


@pytest.fixture()
def workspace(tmp_path):
    (tmp_path / "net.edges").write_text(read_fixture("golden/net.edges"))
    (tmp_path / "up.paths").write_text(read_fixture("golden/up.paths"))
    return tmp_path


def run(capsys, *argv: str) -> tuple[int, str, str]:
    rc = main(list(argv))
    captured = capsys.readouterr()
    return rc, captured.out, captured.err


class TestGen:
    def test_writes_monitored_topology(self, tmp_path, capsys):
        out = tmp_path / "g.edges"
        rc, _, _ = run(capsys, "gen", "--n", "8", "--p", "0.4", "--seed", "7", "--mu", "2", "--out", str(out))
        assert rc == EXIT_OK
        t = fs.load_topology(out.read_text())
        assert len(t.nodes) == 8 and t.mu == 2

    def test_deterministic(self, capsys):
        rc1, out1, _ = run(capsys, "gen", "--n", "8", "--p", "0.4", "--seed", "7")
        rc2, out2, _ = run(capsys, "gen", "--n", "8", "--p", "0.4", "--seed", "7")
        assert rc1 == rc2 == EXIT_OK
        assert out1 == out2

    def test_rejects_bad_p(self, capsys):
        rc, _, err = run(capsys, "gen", "--n", "8", "--p", "1.5", "--seed", "7")
        assert rc == EXIT_VALIDATION
        assert "error:" in err


class TestAnalyze:
    def test_csv_table(self, workspace, capsys):
        rc, out, _ = run(
            capsys,
            "analyze", "--topology", str(workspace / "net.edges"),
            "--paths", str(workspace / "up.paths"),
            "--mechanism", "up",
        )
        assert rc == EXIT_OK
        assert out.splitlines()[0] == "# schema: faultscope/analysis v1"
        assert "node,up,v2,,4,1,3,0,1,false,," in out

    def test_flags_recorded(self, workspace, capsys):
        rc, out, _ = run(
            capsys,
            "analyze", "--topology", str(workspace / "net.edges"),
            "--paths", str(workspace / "up.paths"),
            "--mechanism", "up",
        )
        assert rc == EXIT_OK
        flags = next(line for line in out.splitlines() if line.startswith("# flags:"))
        assert "mechanism=up" in flags and "paths=" in flags

    def test_json_format(self, workspace, capsys):
        rc, out, _ = run(
            capsys,
            "analyze", "--topology", str(workspace / "net.edges"),
            "--paths", str(workspace / "up.paths"),
            "--format", "json",
        )
        assert rc == EXIT_OK
        doc = json.loads(out)
        assert doc["sigma"] == 4

    def test_exact_mode(self, workspace, capsys):
        rc, out, _ = run(
            capsys,
            "analyze", "--topology", str(workspace / "net.edges"),
            "--paths", str(workspace / "up.paths"),
            "--mechanism", "up", "--exact",
        )
        assert rc == EXIT_OK
        assert "node,up,v2,,4,1,3,1,1,true,," in out

    def test_set_query(self, workspace, capsys):
        rc, out, _ = run(
            capsys,
            "analyze", "--topology", str(workspace / "net.edges"),
            "--paths", str(workspace / "up.paths"),
            "--mechanism", "up", "--set", "v1,v2,v4",
        )
        assert rc == EXIT_OK
        assert "set,up,v1+v2+v4,,,,,1,1,true,," in out

    def test_inline_monitors_override(self, workspace, capsys):
        rc, out, _ = run(
            capsys,
            "analyze", "--topology", str(workspace / "net.edges"),
            "--monitors", "m1,m2,m3,v3",
            "--mechanism", "cap",
        )
        assert rc == EXIT_OK
        assert "node,cap,v3" not in out
        assert "node,cap,v2" in out

    def test_monitor_file(self, workspace, capsys):
        mons = workspace / "mons.txt"
        mons.write_text("m1 m2\nm3\n")
        rc, out, _ = run(
            capsys,
            "analyze", "--topology", str(workspace / "net.edges"),
            "--monitors", f"@{mons}",
            "--mechanism", "cap",
        )
        assert rc == EXIT_OK
        assert "node,cap,v2,,4,1,3,4,4,true,," in out

    def test_out_file_matches_stdout(self, workspace, capsys):
        target = workspace / "report.csv"
        rc, out, _ = run(
            capsys,
            "analyze", "--topology", str(workspace / "net.edges"),
            "--paths", str(workspace / "up.paths"),
            "--mechanism", "up",
        )
        rc2, _, _ = run(
            capsys,
            "analyze", "--topology", str(workspace / "net.edges"),
            "--paths", str(workspace / "up.paths"),
            "--mechanism", "up", "--out", str(target),
        )
        assert rc == rc2 == EXIT_OK
        assert target.read_text() == out

    def test_missing_topology_file(self, workspace, capsys):
        rc, _, err = run(capsys, "analyze", "--topology", str(workspace / "absent.edges"))
        assert rc == EXIT_VALIDATION
        assert "error:" in err

    def test_bad_path_file(self, workspace, capsys):
        bad = workspace / "bad.paths"
        bad.write_text("v1 v2 v4\n")
        rc, _, err = run(
            capsys,
            "analyze", "--topology", str(workspace / "net.edges"), "--paths", str(bad),
        )
        assert rc == EXIT_VALIDATION
        assert "endpoints must be monitors" in err

    def test_monitor_in_set_rejected(self, workspace, capsys):
        rc, _, err = run(
            capsys,
            "analyze", "--topology", str(workspace / "net.edges"),
            "--mechanism", "cap", "--set", "m1",
        )
        assert rc == EXIT_VALIDATION


class TestUsageErrors:
    def test_no_subcommand(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main([])
        assert exc.value.code == EXIT_USAGE
        assert "usage:" in capsys.readouterr().err

    def test_unknown_mechanism(self, workspace, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["analyze", "--topology", str(workspace / "net.edges"), "--mechanism", "zz"])
        assert exc.value.code == EXIT_USAGE


class TestMaxset:
    def test_single_k(self, workspace, capsys):
        rc, out, _ = run(
            capsys,
            "maxset", "--topology", str(workspace / "net.edges"),
            "--mechanism", "csp", "--k", "4",
        )
        assert rc == EXIT_OK
        assert "maxset,csp,,4,,,,,,true,v1+v3+v4,v1+v3+v4" in out

    def test_set_query(self, workspace, capsys):
        rc, out, _ = run(
            capsys,
            "maxset", "--topology", str(workspace / "net.edges"),
            "--mechanism", "csp", "--set", "v1,v2,v3,v4",
        )
        assert rc == EXIT_OK
        assert "set,csp,v1+v2+v3+v4,,,,,3,3,true,," in out


class TestCcdf:
    def test_fixture_table(self, workspace, capsys):
        rc, out, _ = run(
            capsys,
            "ccdf", "--topology", str(workspace / "net.edges"),
            "--paths", str(workspace / "up.paths"),
            "--mechanism", "up",
        )
        assert rc == EXIT_OK
        assert "1,up,3,0.75,0.75,true" in out

    def test_batch_inline(self, capsys):
        spec = '{"count": 2, "n": 8, "p": 0.4, "mus": [2], "seed": 5, "mechanisms": ["cap"]}'
        rc, out, _ = run(capsys, "ccdf", "--batch", spec)
        assert rc == EXIT_OK
        assert out.splitlines()[0] == "# schema: faultscope/ccdf v1"

    def test_batch_jobs_byte_identical(self, capsys):
        spec = '{"count": 2, "n": 8, "p": 0.4, "mus": [2], "seed": 5, "mechanisms": ["cap"]}'
        rc1, out1, _ = run(capsys, "ccdf", "--batch", spec, "--jobs", "1")
        rc2, out2, _ = run(capsys, "ccdf", "--batch", spec, "--jobs", "2")
        assert rc1 == rc2 == EXIT_OK
        assert out1 == out2

    def test_batch_file(self, workspace, capsys):
        spec = workspace / "batch.json"
        spec.write_text('{"count": 2, "n": 8, "p": 0.4, "mus": [2], "seed": 5}')
        rc, out, _ = run(capsys, "ccdf", "--batch", f"@{spec}")
        assert rc == EXIT_OK

    def test_batch_excludes_topology(self, workspace, capsys):
        spec = '{"count": 1, "n": 8, "p": 0.4, "mus": [2], "seed": 5}'
        rc, _, err = run(
            capsys,
            "ccdf", "--batch", spec, "--topology", str(workspace / "net.edges"),
        )
        assert rc == EXIT_VALIDATION


class TestVerify:
    def test_cut_battery(self, capsys):
        rc, out, _ = run(capsys, "verify", "--kind", "cuts", "--count", "5", "--seed", "3")
        assert rc == EXIT_OK
        assert json.loads(out)["ok"] is True

    def test_er_battery(self, capsys):
        rc, out, _ = run(capsys, "verify", "--kind", "er", "--count", "2", "--seed", "4")
        assert rc == EXIT_OK

    def test_topology_file(self, workspace, capsys):
        rc, out, _ = run(capsys, "verify", "--topology", str(workspace / "net.edges"))
        assert rc == EXIT_OK
        doc = json.loads(out)
        assert doc["instances"] == 1 and doc["ok"] is True

    def test_corruption_exits_nonzero(self, capsys):
        rc, out, _ = run(
            capsys,
            "verify", "--kind", "er", "--count", "2", "--seed", "4", "--corrupt",
        )
        assert rc == EXIT_VERIFY
        assert json.loads(out)["ok"] is False


class TestOracle:
    def test_omega(self, workspace, capsys):
        rc, out, _ = run(
            capsys,
            "oracle", "--topology", str(workspace / "net.edges"),
            "--paths", str(workspace / "up.paths"),
            "--set", "v1,v2,v4",
        )
        assert rc == EXIT_OK
        doc = json.loads(out)
        assert doc["omega"] == 1

    def test_k_query(self, workspace, capsys):
        rc, out, _ = run(
            capsys,
            "oracle", "--topology", str(workspace / "net.edges"),
            "--paths", str(workspace / "up.paths"),
            "--set", "v2", "--k", "2",
        )
        assert rc == EXIT_OK
        doc = json.loads(out)
        assert doc["identifiable"] is False

    def test_defaults_to_all_nodes(self, workspace, capsys):
        rc, out, _ = run(
            capsys,
            "oracle", "--topology", str(workspace / "net.edges"),
            "--paths", str(workspace / "up.paths"),
        )
        assert rc == EXIT_OK
        assert json.loads(out)["omega"] == 0


def test_version(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["--version"])
    assert exc.value.code == 0
    assert "faultscope" in capsys.readouterr().out

import json
import os
import subprocess
import sys
from pathlib import Path

import pytest

SRC = Path(__file__).resolve().parents[1] / "src"

R1_CSV = "a1,a2\n0.1,0.9\n0.5,0.5\n0.9,0.1\n"
R0_CSV = "a1,a2\n0.2,0.3\n0.4,0.5\n0.1,0.8\n0.9,0.9\n"


def run_cli(*args, **kwargs):
    env = dict(os.environ)
    env["PYTHONPATH"] = str(SRC) + os.pathsep + env.get("PYTHONPATH", "")
    return subprocess.run(
        [sys.executable, "-m", "flexsky", *args],
        capture_output=True,
        text=True,
        env=env,
        **kwargs,
    )


@pytest.fixture
def r1_csv(tmp_path):
    path = tmp_path / "r1.csv"
    path.write_text(R1_CSV)
    return str(path)


@pytest.fixture
def r0_csv(tmp_path):
    path = tmp_path / "r0.csv"
    path.write_text(R0_CSV)
    return str(path)


class TestGen:
    def test_row_count_and_header(self, tmp_path):
        out = tmp_path / "x.csv"
        proc = run_cli("gen", "--n", "100", "--d", "2", "--dist", "independent",
                       "--seed", "7", "--out", str(out))
        assert proc.returncode == 0
        lines = out.read_text().splitlines()
        assert len(lines) == 101
        assert lines[0] == "a1,a2"

    def test_rerun_is_byte_identical(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        run_cli("gen", "--n", "50", "--d", "3", "--dist", "anticorrelated", "--seed", "1", "--out", str(a))
        run_cli("gen", "--n", "50", "--d", "3", "--dist", "anticorrelated", "--seed", "1", "--out", str(b))
        assert a.read_bytes() == b.read_bytes()

    def test_zero_rows_is_a_usage_error(self, tmp_path):
        proc = run_cli("gen", "--n", "0", "--d", "2", "--dist", "independent",
                       "--seed", "0", "--out", str(tmp_path / "x.csv"))
        assert proc.returncode == 2

    def test_roundtrip_through_query(self, tmp_path):
        out = tmp_path / "data.csv"
        run_cli("gen", "--n", "40", "--d", "2", "--dist", "independent", "--seed", "3", "--out", str(out))
        proc = run_cli("query", "--in", str(out), "--op", "sky", "--schema", "a1:min,a2:min")
        assert proc.returncode == 0
        assert len(proc.stdout.splitlines()) >= 1


class TestQuery:
    def test_nd_with_inline_constraints(self, r1_csv):
        proc = run_cli("query", "--in", r1_csv, "--op", "nd", "--schema", "a1:min,a2:min",
                       "--normalized", "--constraints", "w_a1 >= w_a2")
        assert proc.returncode == 0
        assert proc.stdout.splitlines() == ["0"]

    def test_constraints_from_file(self, r1_csv, tmp_path):
        cons = tmp_path / "cons.txt"
        cons.write_text("w_a1 >= w_a2\n")
        proc = run_cli("query", "--in", r1_csv, "--op", "nd", "--schema", "a1:min,a2:min",
                       "--normalized", "--constraints", str(cons))
        assert proc.stdout.splitlines() == ["0"]

    def test_topk_prints_scores(self, r0_csv):
        proc = run_cli("query", "--in", r0_csv, "--op", "topk", "--schema", "a1:min,a2:min",
                       "--normalized", "--weights", "0.5,0.5", "--k", "2")
        assert proc.returncode == 0
        assert proc.stdout.splitlines() == ["0,0.25", "1,0.45"]

    def test_infeasible_region_exit_code(self, r1_csv):
        proc = run_cli("query", "--in", r1_csv, "--op", "po", "--schema", "a1:min,a2:min",
                       "--normalized", "--constraints", "w_a1 >= 0.8\nw_a2 >= 0.8")
        assert proc.returncode == 3
        assert "empty weight region" in proc.stderr

    def test_missing_operator_flags_exit_code(self, r0_csv):
        proc = run_cli("query", "--in", r0_csv, "--op", "topk", "--schema", "a1:min,a2:min")
        assert proc.returncode == 2
        assert "--weights" in proc.stderr and "--k" in proc.stderr

    def test_parse_error_reports_location(self, r1_csv):
        proc = run_cli("query", "--in", r1_csv, "--op", "nd", "--schema", "a1:min,a2:min",
                       "--constraints", "w_a1 ?? w_a2")
        assert proc.returncode == 2
        assert "line 1" in proc.stderr

    def test_unknown_csv_column(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("x,y\n1,2\n")
        proc = run_cli("query", "--in", str(path), "--op", "sky", "--schema", "a1:min,a2:min")
        assert proc.returncode == 2
        assert "unknown column" in proc.stderr

    def test_missing_input_file(self, tmp_path):
        proc = run_cli("query", "--in", str(tmp_path / "nope.csv"), "--op", "sky",
                       "--schema", "a1:min,a2:min")
        assert proc.returncode == 2

    def test_lex_and_skyband(self, r0_csv):
        lex = run_cli("query", "--in", r0_csv, "--op", "lex", "--schema", "a1:min,a2:min",
                      "--normalized", "--priority", "a1,a2")
        assert lex.stdout.splitlines() == ["2"]
        band = run_cli("query", "--in", r0_csv, "--op", "skyband", "--schema", "a1:min,a2:min",
                       "--normalized", "--k", "2")
        assert band.stdout.splitlines() == ["0", "1", "2"]

    def test_fskyband(self, r1_csv):
        proc = run_cli("query", "--in", r1_csv, "--op", "fskyband", "--schema", "a1:min,a2:min",
                       "--normalized", "--k", "1", "--constraints", "w_a1 >= w_a2")
        assert proc.stdout.splitlines() == ["0"]

    def test_sky_algo_flag_changes_nothing(self, r0_csv):
        naive = run_cli("query", "--in", r0_csv, "--op", "sky", "--schema", "a1:min,a2:min",
                        "--normalized", "--algo", "naive")
        fast = run_cli("query", "--in", r0_csv, "--op", "sky", "--schema", "a1:min,a2:min",
                       "--normalized", "--algo", "sorted")
        assert naive.stdout == fast.stdout == "0\n2\n"

    def test_id_column(self, tmp_path):
        path = tmp_path / "named.csv"
        path.write_text("car,a1,a2\nbeetle,0.2,0.3\ngolf,0.9,0.9\n")
        proc = run_cli("query", "--in", str(path), "--op", "sky", "--schema", "a1:min,a2:min",
                       "--normalized", "--id-column", "car")
        assert proc.stdout.splitlines() == ["beetle"]

    def test_normalization_is_automatic(self, tmp_path):
        path = tmp_path / "cars.csv"
        path.write_text("price,perf\n10000,100\n50000,300\n30000,290\n40000,120\n")
        proc = run_cli("query", "--in", str(path), "--op", "sky", "--schema", "price:min,perf:max")
        assert proc.stdout.splitlines() == ["0", "1", "2"]

    def test_json_format(self, r1_csv):
        proc = run_cli("query", "--in", r1_csv, "--op", "nd", "--schema", "a1:min,a2:min",
                       "--normalized", "--constraints", "w_a1 >= w_a2", "--format", "json")
        payload = json.loads(proc.stdout)
        assert [e["id"] for e in payload["entries"]] == [0]
        assert payload["meta"]["op"] == "nd"
        assert payload["meta"]["n"] == 3
        assert payload["meta"]["vertices"] == 2

    def test_summary_goes_to_stderr(self, r0_csv):
        proc = run_cli("query", "--in", r0_csv, "--op", "sky", "--schema", "a1:min,a2:min",
                       "--normalized")
        assert proc.stderr.startswith("# op=sky n=4 d=2 out=2")

    def test_deterministic_output_bytes(self, r0_csv):
        args = ("query", "--in", r0_csv, "--op", "topk", "--schema", "a1:min,a2:min",
                "--normalized", "--weights", "0.3,0.7", "--k", "4")
        assert run_cli(*args).stdout == run_cli(*args).stdout


class TestBench:
    def test_single_cell_produces_three_rows(self, tmp_path):
        out = tmp_path / "bench.csv"
        proc = run_cli("bench", "--dists", "independent", "--ns", "50", "--ds", "2",
                       "--constraints-per-cell", "2", "--seeds", "0", "--out", str(out))
        assert proc.returncode == 0
        lines = out.read_text().splitlines()
        assert lines[0] == "dist,n,d,m_constraints,seed,op,out_card,vertices,ms"
        assert len(lines) == 4
        assert [line.split(",")[5] for line in lines[1:]] == ["sky", "nd", "po"]

    def test_containment_across_the_matrix(self, tmp_path):
        out = tmp_path / "bench.csv"
        run_cli("bench", "--dists", "independent,anticorrelated", "--ns", "60,120", "--ds", "2,3",
                "--constraints-per-cell", "0,2", "--seeds", "1,2", "--out", str(out))
        rows = [line.split(",") for line in out.read_text().splitlines()[1:]]
        cells = {}
        for dist, n, d, m, seed, op, card, *_ in rows:
            cells.setdefault((dist, n, d, m, seed), {})[op] = int(card)
        assert cells
        for ops in cells.values():
            assert ops["po"] <= ops["nd"] <= ops["sky"]

    def test_determinism_modulo_timings(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        args = ("bench", "--dists", "correlated", "--ns", "80", "--ds", "3",
                "--constraints-per-cell", "1", "--seeds", "5")
        run_cli(*args, "--out", str(a))
        run_cli(*args, "--out", str(b))
        strip = lambda p: [line.rsplit(",", 1)[0] for line in p.read_text().splitlines()]
        assert strip(a) == strip(b)

    def test_bad_matrix_flags(self, tmp_path):
        proc = run_cli("bench", "--dists", "independent", "--ns", "0", "--ds", "2",
                       "--constraints-per-cell", "1", "--seeds", "0", "--out", str(tmp_path / "x.csv"))
        assert proc.returncode == 2


class TestUsage:
    def test_no_command(self):
        assert run_cli().returncode == 2

    def test_unknown_operator(self, tmp_path):
        path = tmp_path / "d.csv"
        path.write_text("a1\n0.5\n")
        proc = run_cli("query", "--in", str(path), "--op", "magic", "--schema", "a1:min")
        assert proc.returncode == 2

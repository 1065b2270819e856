import json
from pathlib import Path

import pytest

from robustnet.cli import (approx_error_harness, parse_and_dispatch, scalability_harness)
from robustnet.errors import RobustnetError
from robustnet.graph import GeneratorParams, generate_clustered_scale_free

TRIANGLE = "0 1\n1 2\n0 2\n"
GEN = "gen:csf:n=60,m=2,p=0.3,seed=5"


@pytest.fixture()
def tri_file(tmp_path):
    path = tmp_path / "tri.edges"
    path.write_text(TRIANGLE)
    return path


def run_cli(*argv):
    return parse_and_dispatch([str(a) for a in argv])


class TestMeasureCommand:
    def test_effective_resistance_prints_value(self, tri_file, capsys):
        assert run_cli("measure", "--id", "effective_resistance", "--in", tri_file) == 0
        assert capsys.readouterr().out.strip() == "2.0"

    def test_all_measures_schema(self, tri_file, tmp_path):
        out = tmp_path / "m.csv"
        assert run_cli("measure", "--id", "all", "--in", tri_file, "--out", out, "--seed", 3) == 0
        lines = out.read_text().strip().splitlines()
        assert lines[0] == "measure_id,value,exact,higher_is_more_robust,k_used,flagged"
        assert len(lines) == 1 + 22  # header + every measure id (seed given)
        assert Path(f"{out}.manifest.json").exists()

    def test_unknown_measure_is_usage_error(self, tri_file):
        assert run_cli("measure", "--id", "nope", "--in", tri_file) == 2

    def test_missing_file_is_usage_error(self, tmp_path):
        assert run_cli("measure", "--id", "lcc", "--in", tmp_path / "missing.edges") == 2

    def test_malformed_file_is_usage_error(self, tmp_path):
        bad = tmp_path / "bad.edges"
        bad.write_text("a b\n")
        assert run_cli("measure", "--id", "lcc", "--in", bad) == 2

    def test_sampled_measure_requires_seed(self, tri_file):
        assert run_cli("measure", "--id", "approx_avg_vertex_betweenness", "--in", tri_file) == 2

    def test_json_format(self, tri_file, tmp_path):
        out = tmp_path / "m.json"
        assert run_cli("measure", "--id", "lcc", "--in", tri_file, "--out", out,
                       "--format", "json") == 0
        data = json.loads(out.read_text())
        assert data[0]["measure_id"] == "lcc" and data[0]["value"] == 1.0


class TestStochasticCommands:
    def test_attack_requires_seed(self, tri_file):
        assert run_cli("attack", "--strategy", "rnd", "--kind", "node", "--count", 2,
                       "--in", tri_file) == 2

    def test_attack_trace_schema_and_rerun_identical(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        args = ["attack", "--strategy", "rb", "--kind", "node", "--count", 10,
                "--measure", "lcc", "--seed", 7, "--in", GEN]
        assert run_cli(*args, "--out", a) == 0
        assert run_cli(*args, "--out", b) == 0
        assert a.read_bytes() == b.read_bytes()
        lines = a.read_text().strip().splitlines()
        assert lines[0] == "step,removed_id,measure_value,flagged"
        assert len(lines) == 12
        assert lines[1].startswith("0,,1.0")

    def test_attack_count_too_large_is_usage_error(self, tri_file):
        assert run_cli("attack", "--strategy", "rnd", "--kind", "node", "--count", 99,
                       "--seed", 1, "--in", tri_file) == 2

    def test_defend_roundtrip(self, tmp_path):
        frag = tmp_path / "frag.edges"
        frag.write_text("0 1\n2 3\n4 5\n")
        out = tmp_path / "rec.csv"
        assert run_cli("defend", "--strategy", "preferential_addition", "--budget", 2,
                       "--seed", 3, "--in", frag, "--out", out) == 0
        lines = out.read_text().strip().splitlines()
        assert lines[0] == "step,action,measure_value,flagged"
        assert len(lines) == 4

    def test_netshield_json(self, tmp_path):
        out = tmp_path / "monitored.json"
        assert run_cli("netshield", "--in", GEN, "--seed", 5, "--k", 5, "--out", out) == 0
        data = json.loads(out.read_text())
        assert len(data["nodes"]) == 5
        assert data["eigendrop"] > 0
        assert data["shield_value"] > 0

    def test_sis_with_monitor_file(self, tmp_path):
        monitored = tmp_path / "monitored.json"
        run_cli("netshield", "--in", GEN, "--seed", 5, "--k", 3, "--out", monitored)
        out = tmp_path / "sis.csv"
        assert run_cli("sis", "--in", GEN, "--s", "2.5", "--delta", "0.1", "--steps", 40,
                       "--init-frac", "0.1", "--monitor", monitored, "--seed", 4,
                       "--out", out) == 0
        lines = out.read_text().strip().splitlines()
        assert lines[0] == "step,susceptible,infected,infected_fraction"
        first = lines[1].split(",")
        assert int(first[1]) + int(first[2]) == 57  # population after monitoring

    def test_sir_trace_has_recovered_column(self, tmp_path):
        out = tmp_path / "sir.csv"
        assert run_cli("sir", "--in", GEN, "--beta", "0.3", "--delta", "0.4", "--steps", 100,
                       "--init-frac", "0.2", "--seed", 6, "--out", out) == 0
        lines = out.read_text().strip().splitlines()
        assert lines[0] == "step,susceptible,infected,recovered,infected_fraction"
        assert lines[-1].split(",")[2] == "0"  # absorbing recovery empties infection

    def test_beta_and_s_are_exclusive(self, tri_file):
        assert run_cli("sis", "--in", tri_file, "--beta", "0.1", "--s", "2.0", "--delta",
                       "0.1", "--steps", 5, "--init-frac", "0.5", "--seed", 1) == 2
        assert run_cli("sis", "--in", tri_file, "--delta", "0.1", "--steps", 5,
                       "--init-frac", "0.5", "--seed", 1) == 2

    def test_cascade_csv(self, tmp_path):
        out = tmp_path / "casc.csv"
        assert run_cli("cascade", "--in", "gen:grid:rows=8,cols=8,shortcuts=6,seed=2",
                       "--lmax", "0.8", "--r", "0.25", "--attack", "id:3",
                       "--seed", 4, "--out", out) == 0
        lines = out.read_text().strip().splitlines()
        assert lines[0] == "step,failed_count,failed_fraction,total_live_load"
        assert lines[1].split(",")[1] == "3"

    def test_sweep_rerun_identical(self, tmp_path):
        a, b = tmp_path / "s1.csv", tmp_path / "s2.csv"
        args = ["sweep", "--in", GEN, "--model", "sis", "--s-grid", "0,3.0",
                "--delta", "0.1", "--steps", 30, "--init-frac", "0.1", "--seeds", "0:3"]
        assert run_cli(*args, "--out", a) == 0
        assert run_cli(*args, "--out", b) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_sweep_empty_grid_usage_error(self, tri_file):
        assert run_cli("sweep", "--in", tri_file, "--model", "sis", "--s-grid", "",
                       "--init-frac", "0.5", "--seeds", "0:2") == 2

    def test_no_output_on_validation_failure(self, tmp_path):
        out = tmp_path / "never.csv"
        assert run_cli("attack", "--strategy", "warp", "--kind", "node", "--count", 1,
                       "--seed", 1, "--in", GEN, "--out", out) == 2
        assert not out.exists()


class TestGeneratorSpecs:
    def test_gen_requires_seed_somewhere(self):
        assert run_cli("measure", "--id", "lcc", "--in", "gen:csf:n=30,m=2,p=0.3") == 2
        assert run_cli("measure", "--id", "lcc", "--in", "gen:csf:n=30,m=2,p=0.3",
                       "--seed", 3) == 0

    def test_bad_genspec(self):
        assert run_cli("measure", "--id", "lcc", "--in", "gen:wat:n=10", "--seed", 1) == 2
        assert run_cli("measure", "--id", "lcc", "--in", "gen:csf:n=", "--seed", 1) == 2


class TestManifestAndSidecars:
    def test_manifest_digest_tracks_edge_set(self, tmp_path):
        f1 = tmp_path / "g1.edges"
        f2 = tmp_path / "g2.edges"
        f1.write_text("0 1\n1 2\n")
        f2.write_text("# comment\n1 2\n0 1\n")  # same normalized edge set
        digests = []
        for f, name in ((f1, "o1.csv"), (f2, "o2.csv")):
            out = tmp_path / name
            run_cli("measure", "--id", "all", "--in", f, "--out", out, "--seed", 1)
            digests.append(json.loads(Path(f"{out}.manifest.json").read_text())["graph"]["sha256"])
        assert digests[0] == digests[1]
        f3 = tmp_path / "g3.edges"
        f3.write_text("0 1\n1 2\n2 3\n")
        out = tmp_path / "o3.csv"
        run_cli("measure", "--id", "all", "--in", f3, "--out", out, "--seed", 1)
        d3 = json.loads(Path(f"{out}.manifest.json").read_text())["graph"]["sha256"]
        assert d3 != digests[0]

    def test_idmap_sidecar_for_noncontiguous_ids(self, tmp_path):
        f = tmp_path / "g.edges"
        f.write_text("10 20\n20 30\n")
        out = tmp_path / "m.csv"
        run_cli("measure", "--id", "all", "--in", f, "--out", out, "--seed", 1)
        mapping = json.loads(Path(f"{out}.idmap.json").read_text())
        assert mapping == {"10": 0, "20": 1, "30": 2}

    def test_plot_writes_png(self, tmp_path):
        out = tmp_path / "trace.csv"
        assert run_cli("attack", "--strategy", "rnd", "--kind", "node", "--count", 5,
                       "--seed", 2, "--in", GEN, "--out", out, "--plot") == 0
        assert (tmp_path / "trace.png").stat().st_size > 0

    def test_out_dir_env(self, tmp_path, monkeypatch):
        monkeypatch.setenv("ROBUSTNET_OUT_DIR", str(tmp_path / "results"))
        assert run_cli("measure", "--id", "lcc", "--in", GEN, "--seed", 1,
                       "--out", "m.csv") == 0
        assert (tmp_path / "results" / "m.csv").exists()


class TestHarnesses:
    def test_approx_error_zero_at_k_n(self):
        g = generate_clustered_scale_free(GeneratorParams(50, 2, 0.3, 5))
        rows = approx_error_harness(g, "approx_avg_vertex_betweenness", [g.n], runs=3, seed=1)
        assert rows[0]["mean_abs_error"] <= 1e-9

    def test_approx_error_runs_zero_rejected(self):
        g = generate_clustered_scale_free(GeneratorParams(30, 2, 0.3, 5))
        with pytest.raises(RobustnetError):
            approx_error_harness(g, "approx_avg_vertex_betweenness", [5], runs=0, seed=1)

    def test_approx_error_cli(self, tmp_path):
        out = tmp_path / "ae.csv"
        assert run_cli("approx-error", "--in", GEN, "--measure", "approx_natural_connectivity",
                       "--k-grid", "5,60", "--runs", 2, "--seed", 1, "--out", out) == 0
        lines = out.read_text().strip().splitlines()
        assert len(lines) == 3
        assert lines[0].startswith("measure_id,k,runs,exact_value,mean_abs_error")

    def test_scalability_rows_and_timeout(self, tmp_path):
        rows = scalability_harness(["lcc", "avg_vertex_betweenness"], [100, 800], 30.0, seed=2)
        assert len(rows) == 4  # measures x sizes
        assert all(isinstance(r["seconds"], float) for r in rows)
        rows_to = scalability_harness(["avg_vertex_betweenness"], [3000], 0.4, seed=2)
        assert rows_to[0]["seconds"] == "TIMEOUT"

    def test_scalability_sizes_must_ascend(self):
        with pytest.raises(RobustnetError):
            scalability_harness(["lcc"], [500, 100], 5.0, seed=1)

"""End-to-end command-line behavior: formats, exit codes, determinism."""

from __future__ import annotations

import json

import pytest

from nestseg.cli import (ComparisonReport, RunConfig, compare_baselines,
                         export_dot, export_tsv, main, resolve_source,
                         run_pipeline)
from nestseg.graph_core import load_edge_list_path
from nestseg.weighting import WeightingScheme

from conftest import KARATE, LESMIS


KARATE_PATH = str(KARATE)


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


# ------------------------------------------------------------------ reports

def test_run_json_schema_and_frozen_values(capsys):
    code, out, err = run_cli(capsys, "run", "--input", KARATE_PATH,
                             "-k", "3", "--scheme", "sum")
    assert code == 0, err
    report = json.loads(out)
    assert set(report) == {"order", "breakpoints", "communities", "total_score"}
    assert report["breakpoints"] == [1, 4, 16, 34]
    assert report["order"][0] == "34"
    assert report["communities"][0]["vertices"] == ["34", "33", "24", "30"]
    assert report["total_score"] == pytest.approx(1.0309838328229002, abs=1e-9)
    dens = [c["community_density"] for c in report["communities"]]
    assert all(a > b for a, b in zip(dens, dens[1:]))
    # communities are nested: each vertex list extends the previous one
    for prev, cur in zip(report["communities"], report["communities"][1:]):
        assert cur["vertices"][:len(prev["vertices"])] == prev["vertices"]
    assert len(report["communities"][-1]["vertices"]) == 34
    # total equals the sum of per-segment scores
    assert report["total_score"] == pytest.approx(
        sum(c["segment_score"] for c in report["communities"]), abs=1e-9)


def test_run_is_deterministic(capsys):
    argv = ("run", "--input", KARATE_PATH, "-k", "4", "--scheme", "norm")
    _, out1, _ = run_cli(capsys, *argv)
    _, out2, _ = run_cli(capsys, *argv)
    assert out1 == out2


def test_run_explicit_source(capsys):
    code, out, _ = run_cli(capsys, "run", "--input", KARATE_PATH,
                           "-k", "2", "--source", "1")
    assert code == 0
    report = json.loads(out)
    assert report["order"][0] == "1"
    assert report["communities"][0]["vertices"][0] == "1"


def test_run_multi_vertex_source(capsys):
    code, out, _ = run_cli(capsys, "run", "--input", KARATE_PATH,
                           "-k", "2", "--source", "1,34", "--scheme", "norm")
    report = json.loads(out)
    if code == 0:
        assert report["order"][:2] == ["1", "34"]
    else:
        assert code == 1  # density monotonicity can fail for larger sources


@pytest.mark.parametrize("order", ["peel", "degree", "pagerank", "hops"])
def test_run_alternative_orders(capsys, order):
    code, out, err = run_cli(capsys, "run", "--input", KARATE_PATH,
                             "-k", "3", "--order", order)
    assert code == 0, err
    report = json.loads(out)
    assert len(report["order"]) == 34


def test_run_original_scheme_keeps_weights(capsys):
    code, out, err = run_cli(capsys, "run", "--input", KARATE_PATH,
                             "-k", "3", "--scheme", "original")
    assert code == 0, err


def test_run_writes_output_file(tmp_path, capsys):
    target = tmp_path / "report.json"
    code, out, _ = run_cli(capsys, "run", "--input", KARATE_PATH,
                           "-k", "3", "--output", str(target))
    assert code == 0
    assert out == ""
    report = json.loads(target.read_text())
    assert report["breakpoints"][0] == 1


# ------------------------------------------------------------------ formats

def test_dot_output_shape(capsys):
    code, out, _ = run_cli(capsys, "run", "--input", KARATE_PATH,
                           "-k", "3", "--format", "dot")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "graph communities {"
    assert lines[-1] == "}"
    assert out.count("peripheries=2") == 1  # single source vertex
    g = load_edge_list_path(KARATE_PATH)
    assert out.count(" -- ") == g.total_edge_count
    assert out.count("fillcolor") == g.num_vertices
    # k=3 plus the source color
    colors = {ln.split('fillcolor="')[1].split('"')[0]
              for ln in lines if "fillcolor" in ln}
    assert len(colors) == 4


def test_export_subcommand_matches_dot_format(capsys):
    _, dot1, _ = run_cli(capsys, "run", "--input", KARATE_PATH,
                         "-k", "3", "--format", "dot")
    _, dot2, _ = run_cli(capsys, "export", "--input", KARATE_PATH, "-k", "3")
    assert dot1 == dot2


def test_tsv_output_shape(capsys):
    code, out, _ = run_cli(capsys, "run", "--input", KARATE_PATH,
                           "-k", "3", "--format", "tsv")
    assert code == 0
    lines = out.splitlines()
    assert lines[0].split("\t") == ["position", "vertex", "pair_count",
                                    "density", "internal_sse", "segment"]
    assert len(lines) == 34  # header + one row per non-source vertex
    first = lines[1].split("\t")
    assert first[0] == "2"
    assert first[2] == "1"
    segments = [int(row.split("\t")[5]) for row in lines[1:]]
    assert segments == sorted(segments)
    assert set(segments) == {1, 2, 3}


# ------------------------------------------------------------------ compare

def test_compare_report_structure(capsys):
    code, out, err = run_cli(capsys, "compare", "--input", KARATE_PATH,
                             "--k-min", "2", "--k-max", "4")
    assert code == 0, err
    report = json.loads(out)
    assert report["cells"] == 9  # 3 schemes x 3 values of k
    assert set(report["schemes"]) == {"norm", "sum", "min"}
    for scheme in report["schemes"]:
        for order in ("peel", "degree", "pagerank"):
            scores = report["scores"][scheme][order]
            assert set(scores) == {"2", "3", "4"}
        for k, won in report["wins"][scheme].items():
            peel = report["scores"][scheme]["peel"][k]
            deg = report["scores"][scheme]["degree"][k]
            pg = report["scores"][scheme]["pagerank"][k]
            assert won == (peel <= deg and peel <= pg)
        hops = report["hops"][scheme]
        assert hops["k"] >= 1
        assert hops["hops_score"] > 0
    assert 0.0 <= report["win_rate"] <= 1.0
    assert report["wins_both"] <= report["cells"]


def test_compare_ratios_normalized_by_single_community_score():
    cfg = RunConfig(input_path=KARATE_PATH, k=1, scheme=WeightingScheme.SUM)
    report = compare_baselines(cfg, range(2, 4))
    for scheme in report.ratios:
        for ratios in report.ratios[scheme].values():
            for ratio in ratios.values():
                if ratio is not None:
                    assert ratio > 0
    as_dict = report.to_dict()
    assert as_dict["cells"] == report.cells


# ------------------------------------------------------------------- verify

def test_verify_subcommand_clean(capsys):
    code, out, _ = run_cli(capsys, "verify", "--seed", "3", "--trials", "4")
    assert code == 0
    lines = [ln for ln in out.splitlines() if ln.startswith("prop ")]
    assert len(lines) == 5
    assert all(": OK (" in ln for ln in lines)


def test_verify_subset_of_properties(capsys):
    code, out, _ = run_cli(capsys, "verify", "--props", "pav,dp",
                           "--seed", "1", "--trials", "5")
    assert code == 0
    lines = [ln for ln in out.splitlines() if ln.startswith("prop ")]
    assert [ln.split()[1].rstrip(":") for ln in lines] == ["pav", "dp"]


def test_verify_unknown_property(capsys):
    code, _, err = run_cli(capsys, "verify", "--props", "bogus")
    assert code == 1
    assert "unknown property" in err


# --------------------------------------------------------------- exit codes

def test_missing_file_exits_one(capsys):
    code, _, err = run_cli(capsys, "run", "--input", "no/such/file.txt", "-k", "2")
    assert code == 1
    assert "error:" in err


def test_malformed_file_exits_one(tmp_path, capsys):
    bad = tmp_path / "bad.txt"
    bad.write_text("a b 1\nb c -3\n")
    code, _, err = run_cli(capsys, "run", "--input", str(bad), "-k", "2")
    assert code == 1
    assert "line 2" in err


def test_unknown_source_exits_one(capsys):
    code, _, err = run_cli(capsys, "run", "--input", KARATE_PATH,
                           "-k", "2", "--source", "nope")
    assert code == 1
    assert "unknown source" in err


def test_infeasible_k_exits_two_with_maximum(capsys):
    code, _, err = run_cli(capsys, "run", "--input", KARATE_PATH, "-k", "40")
    assert code == 2
    assert "max feasible" in err


def test_zero_k_exits_one(capsys):
    code, _, err = run_cli(capsys, "run", "--input", KARATE_PATH, "-k", "0")
    assert code == 1


def test_usage_error_exits_one(capsys):
    code, _, _ = run_cli(capsys, "run", "--input")  # missing value
    assert code == 1


def test_help_exits_zero(capsys):
    code, out, _ = run_cli(capsys, "--help")
    assert code == 0
    assert "run" in out and "compare" in out


# ------------------------------------------------------------------ library

def test_resolve_source_default_picks_heaviest():
    g = load_edge_list_path(KARATE_PATH)
    assert resolve_source(g, None) == {g.label_index["34"]}
    assert resolve_source(g, ["max-degree"]) == {g.label_index["34"]}
    assert resolve_source(g, ["1", "2"]) == {g.label_index["1"],
                                            g.label_index["2"]}
    with pytest.raises(ValueError):
        resolve_source(g, ["ghost"])


def test_run_pipeline_reports_match_sequence():
    cfg = RunConfig(input_path=KARATE_PATH, k=3, scheme=WeightingScheme.SUM)
    seq, report = run_pipeline(cfg)
    assert report["breakpoints"] == list(seq.breakpoints)
    assert report["total_score"] == seq.total_score
    assert [c["segment_centroid"] for c in report["communities"]] == \
        list(seq.segment_centroids)


def test_lesmis_runs_end_to_end(capsys):
    code, out, err = run_cli(capsys, "run", "--input", str(LESMIS),
                             "-k", "4", "--scheme", "min")
    assert code == 0, err
    report = json.loads(out)
    assert len(report["order"]) == 77
    dens = [c["community_density"] for c in report["communities"]]
    assert all(a > b for a, b in zip(dens, dens[1:]))

"""Smoke tests for the python module and the forge CLI."""

import json
import os
import subprocess
from pathlib import Path

import pytest

import mtforge as mf

ROOT = Path(os.environ.get("MTFORGE_ROOT", Path(__file__).resolve().parents[2]))
CLI = os.environ.get("MTFORGE_CLI", "")
SCHEMA = ROOT / "data" / "fixture" / "schema.json"
GRAPH = ROOT / "data" / "fixture" / "graph.json"
FIGURE1 = ROOT / "data" / "fixture" / "figure1.jsonl"
PROMPTS = ROOT / "prompts"

Q1 = (
    "match (s:stock)-[:belong_to]->(i:industry) WHERE i.name = 'securities' "
    "return s.name order by s.opening_price desc limit 1"
)


@pytest.fixture(scope="module")
def graph():
    schema = mf.load_schema(str(SCHEMA))
    return mf.load_graph(schema, str(GRAPH))


@pytest.fixture(scope="module")
def schema():
    return mf.load_schema(str(SCHEMA))


def test_figure1_queries(graph):
    assert mf.execute(Q1, graph) == ["CITIC Securities"]
    q2 = (
        "match (s:stock {name: 'CITIC Securities'})-[:has_data]->"
        "(d:stock_data {date: '2025-01-08'}) return d.opening_price"
    )
    assert mf.execute(q2, graph) == [30.26]


def test_canonicalization_and_masking(graph, schema):
    canon = mf.parse_canonical(Q1)
    assert canon.startswith("MATCH (v1:stock)")
    assert mf.parse_canonical(canon) == canon
    masked = mf.mask_entities(
        "MATCH (s:stock {name: 'CITIC Securities'}) RETURN s.opening_price", schema
    )
    assert "'[s]'" in masked


def test_keywords_and_classification():
    counts = mf.count_keywords(Q1)
    assert counts["informative_total"] == 3
    assert counts["counts"]["ORDER BY"] == 1
    assert mf.classify_query_type(Q1) == "NumericalSorting"


def test_embedding_helpers():
    v = mf.fallback_embed("opening price")
    assert len(v) == 384
    assert mf.cosine_similarity(v, v) == pytest.approx(1.0)


def test_generation_and_stats(graph, tmp_path):
    dialogues = mf.generate_dataset(graph, str(PROMPTS), 5, seed=3)
    assert len(dialogues) == 5
    for d in dialogues:
        assert 5 <= len(d["turns"]) <= 8
        for turn in d["turns"]:
            assert mf.execute(turn["gql"], graph) == turn["answer"]


def test_infer_matches_figure1(graph, schema):
    rows = mf.infer_dataset(str(FIGURE1), graph, str(PROMPTS), seed=1)
    assert len(rows) == 4
    gold = mf.read_dataset(str(FIGURE1))[0]
    for row, turn in zip(rows, gold["turns"]):
        assert mf.execute(row["gql"], graph) == turn["answer"]


@pytest.mark.skipif(not CLI, reason="CLI path not provided")
class TestCli:
    def run(self, *args, check=True):
        proc = subprocess.run(
            [CLI, *args], capture_output=True, text=True, cwd=ROOT
        )
        if check:
            assert proc.returncode == 0, proc.stderr
        return proc

    def test_generate_is_deterministic(self, tmp_path):
        out_a = tmp_path / "a.jsonl"
        out_b = tmp_path / "b.jsonl"
        common = [
            "generate", "--schema", str(SCHEMA), "--graph", str(GRAPH),
            "--count", "5", "--seed", "1", "--mock",
        ]
        self.run(*common, "--out", str(out_a))
        self.run(*common, "--out", str(out_b))
        assert out_a.read_bytes() == out_b.read_bytes()

    def test_evaluate_identity_is_perfect(self, tmp_path):
        preds = tmp_path / "preds.jsonl"
        gold = json.loads(FIGURE1.read_text())
        with preds.open("w") as fh:
            for turn in gold["turns"]:
                fh.write(json.dumps({"id": gold["id"], "round": turn["round"],
                                     "gql": turn["gql"]}) + "\n")
        report = tmp_path / "report.json"
        self.run(
            "evaluate", "--schema", str(SCHEMA), "--graph", str(GRAPH),
            "--gold", str(FIGURE1), "--pred", str(preds),
            "--breakdown", "round", "--report", str(report),
        )
        doc = json.loads(report.read_text())
        assert doc["em"] == 1.0
        assert doc["aem"] == 1.0
        assert doc["ex"] == 1.0
        assert doc["aex"] == 1.0

    def test_filter_discards_duplicates(self, tmp_path):
        dataset = tmp_path / "dup.jsonl"
        line = FIGURE1.read_text().strip()
        other = json.loads(line)
        other["id"] = "figure1-copy"
        dataset.write_text(line + "\n" + json.dumps(other) + "\n")
        proc = self.run(
            "filter", "--schema", str(SCHEMA), "--graph", str(GRAPH),
            "--dataset", str(dataset),
        )
        report = json.loads(proc.stdout)
        assert report["input"] == 2
        assert report["kept"] == 1

    def test_infer_pipeline_round_trips(self, tmp_path):
        preds = tmp_path / "da.jsonl"
        self.run(
            "infer", "--schema", str(SCHEMA), "--graph", str(GRAPH),
            "--gold", str(FIGURE1), "--out", str(preds), "--mock", "--seed", "7",
        )
        report = tmp_path / "report.json"
        self.run(
            "evaluate", "--schema", str(SCHEMA), "--graph", str(GRAPH),
            "--gold", str(FIGURE1), "--pred", str(preds),
            "--report", str(report),
        )
        doc = json.loads(report.read_text())
        assert doc["ex"] == 1.0  # DA replay execution-matches Figure 1

    def test_stats_reports_dataset_shape(self):
        proc = self.run("stats", "--schema", str(SCHEMA), "--graph", str(GRAPH),
                        "--dataset", str(FIGURE1))
        doc = json.loads(proc.stdout)
        assert doc["data_points"] == 1
        assert doc["total_gqls"] == 4
        assert doc["avg_turns"] == 4.0

    def test_exit_codes(self, tmp_path):
        usage = self.run("no-such-command", check=False)
        assert usage.returncode == 2
        missing = self.run(
            "stats", "--schema", str(SCHEMA), "--graph", str(GRAPH),
            "--dataset", str(tmp_path / "absent.jsonl"), check=False,
        )
        assert missing.returncode == 1

    def test_inputs_are_not_mutated(self, tmp_path):
        before = FIGURE1.read_bytes()
        self.run("stats", "--schema", str(SCHEMA), "--graph", str(GRAPH),
                 "--dataset", str(FIGURE1))
        assert FIGURE1.read_bytes() == before

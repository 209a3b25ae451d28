"""Tests for the result cache and the command-line interface."""

import json
import multiprocessing
import os

import pytest

from prestrata.cache import ALGORITHM_REVISION, cache_get, cache_key, cache_put
from prestrata.cli import main
from prestrata.linalg import SparseRatMatrix


class TestCacheKey:
    def test_distinct_queries_distinct_keys(self):
        keys = {
            cache_key(0, 8, "max-nodes=3"),
            cache_key(0, 8, "all"),
            cache_key(0, 7, "max-nodes=3"),
            cache_key(1, 8, "max-nodes=3"),
        }
        assert len(keys) == 4

    def test_revision_bump_invalidates(self):
        assert cache_key(3, 4, "all") != cache_key(
            3, 4, "all", revision=ALGORITHM_REVISION + "-next"
        )

    def test_schema_bump_invalidates(self):
        assert cache_key(3, 4, "all") != cache_key(3, 4, "all", schema=2)


def _put_worker(args):
    cache_dir, key, value = args
    return cache_put(cache_dir, key, value)


class TestCacheStore:
    def test_put_then_get(self, tmp_path):
        key = cache_key(4, 1, "all")
        value = {"dim": 6, "nested": {"a": [1, 2]}}
        assert cache_put(str(tmp_path), key, value)
        assert cache_get(str(tmp_path), key) == value

    def test_miss_returns_none(self, tmp_path):
        assert cache_get(str(tmp_path), cache_key(9, 9, "all")) is None

    def test_corrupt_entry_degrades_to_miss(self, tmp_path, capsys):
        key = cache_key(4, 1, "all")
        (tmp_path / (key + ".json")).write_text("{not json")
        assert cache_get(str(tmp_path), key) is None
        assert "cache warning" in capsys.readouterr().err

    def test_unwritable_dir_degrades_to_warning(self, tmp_path, capsys):
        blocker = tmp_path / "file"
        blocker.write_text("")
        assert not cache_put(str(blocker / "sub"), "k", {})
        assert "cache warning" in capsys.readouterr().err

    def test_concurrent_double_put(self, tmp_path):
        key = cache_key(0, 3, "all")
        value = {"dim": 5, "provenance": "exact"}
        with multiprocessing.Pool(4) as pool:
            outcomes = pool.map(
                _put_worker, [(str(tmp_path), key, value)] * 8
            )
        assert all(outcomes)
        files = [p for p in os.listdir(tmp_path) if not p.endswith(".tmp")]
        assert files == [key + ".json"]
        assert cache_get(str(tmp_path), key) == value


class TestCliRank:
    def test_prints_bare_integer(self, capsys):
        assert main(["rank", "--n", "0", "--d", "0"]) == 0
        assert capsys.readouterr().out == "1\n"

    def test_locus_flag(self, capsys):
        assert (
            main(["rank", "--n", "0", "--d", "8", "--locus", "max-nodes=3"]) == 0
        )
        assert capsys.readouterr().out == "54\n"

    def test_missing_argument_exits_2(self, capsys):
        with pytest.raises(SystemExit) as info:
            main(["rank", "--n", "4"])
        assert info.value.code == 2

    def test_bad_locus_exits_2(self, capsys):
        with pytest.raises(SystemExit) as info:
            main(["rank", "--n", "4", "--d", "1", "--locus", "bogus"])
        assert info.value.code == 2

    def test_uses_cache(self, tmp_path, capsys):
        argv = ["rank", "--n", "4", "--d", "1", "--cache", str(tmp_path)]
        assert main(argv) == 0
        assert len(os.listdir(tmp_path)) == 1
        assert main(argv) == 0
        assert capsys.readouterr().out == "6\n6\n"


class TestCliTable:
    def test_tsv_output_parses(self, capsys):
        assert main(["table", "--n", "0..3", "--d", "0..2"]) == 0
        lines = capsys.readouterr().out.splitlines()
        assert lines[0].split("\t") == ["d", "0", "1", "2", "3"]
        grid = [line.split("\t") for line in lines[1:]]
        assert [row[1:] for row in grid] == [
            ["1", "1", "1", "1"],
            ["1", "2", "3", "4"],
            ["3", "5", "9", "16"],
        ]

    def test_json_output_parses(self, capsys):
        assert main(["table", "--n", "4", "--d", "1", "--format", "json"]) == 0
        records = json.loads(capsys.readouterr().out)
        assert records == [
            {
                "n": 4,
                "d": 1,
                "locus": "all",
                "generators": 8,
                "relation_rank": 2,
                "dim": 6,
                "provenance": "exact",
            }
        ]

    def test_budget_exhaustion_exits_3_with_partial_output(self, capsys):
        code = main(["table", "--n", "0..1", "--d", "0..1", "--max-seconds", "0"])
        assert code == 3
        lines = capsys.readouterr().out.splitlines()
        assert lines[0] == "d\t0\t1"
        assert lines[1] == "0\t\t"

    def test_generator_budget_exits_3(self, capsys):
        code = main(["table", "--n", "0..2", "--d", "2", "--max-generators", "3"])
        assert code == 3
        assert capsys.readouterr().out.splitlines()[1] == "2\t3\t\t"

    def test_jobs_byte_identical(self, capsys):
        assert main(["table", "--n", "0..4", "--d", "0..3", "--jobs", "1"]) == 0
        first = capsys.readouterr().out
        assert main(["table", "--n", "0..4", "--d", "0..3", "--jobs", "3"]) == 0
        assert capsys.readouterr().out == first

    def test_warm_cache_byte_identical(self, tmp_path, capsys):
        argv = ["table", "--n", "0..3", "--d", "0..3", "--cache", str(tmp_path)]
        assert main(argv) == 0
        cold = capsys.readouterr().out
        assert main(argv) == 0
        assert capsys.readouterr().out == cold

    def test_exact_only_accepts_exact_results(self, capsys):
        assert main(["table", "--n", "0..1", "--d", "0..1", "--exact-only"]) == 0


class TestCliHilbert:
    def test_reports_match(self, capsys):
        code = main(
            [
                "hilbert",
                "--n",
                "3",
                "--locus",
                "chain-T",
                "--dmax",
                "6",
                "--compare",
                "(1-t)/(1-2t)",
            ]
        )
        assert code == 0
        lines = capsys.readouterr().out.splitlines()
        assert lines[:3] == ["0\t1", "1\t1", "2\t2"]
        assert lines[-1] == "compare\tmatch"

    def test_reports_mismatch_with_exit_1(self, capsys):
        code = main(
            [
                "hilbert",
                "--n",
                "0",
                "--locus",
                "max-nodes=1",
                "--dmax",
                "4",
                "--compare",
                "1/(1-t)",
            ]
        )
        assert code == 1
        assert capsys.readouterr().out.splitlines()[-1] == "compare\tmismatch"

    def test_budget_exits_3_with_partial_output(self, capsys):
        code = main(
            ["hilbert", "--n", "0", "--dmax", "6", "--max-seconds", "0"]
        )
        assert code == 3
        assert capsys.readouterr().out == "0\t1\n"


class TestCliBasisRelationsNormalize:
    def test_basis_lists_strata_json(self, capsys):
        from prestrata.strata import NormalFormStratum

        assert main(["basis", "--n", "0", "--d", "2"]) == 0
        objs = json.loads(capsys.readouterr().out)
        assert len(objs) == 3
        for obj in objs:
            NormalFormStratum.from_json_obj(obj)

    def test_relations_summary_and_dump(self, tmp_path, capsys):
        dump = str(tmp_path / "rel.txt")
        assert main(["relations", "--n", "4", "--d", "1", "--dump", dump]) == 0
        summary = json.loads(capsys.readouterr().out)
        assert summary == {"rows": 2, "cols": 8, "nnz": 4, "rank": 2}
        with open(dump, encoding="utf-8") as fh:
            matrix = SparseRatMatrix.from_triplet_text(fh.read())
        assert (matrix.rows, matrix.cols, matrix.nnz()) == (2, 8, 4)
        with open(dump + ".columns.json", encoding="utf-8") as fh:
            keys = json.load(fh)
        assert len(keys) == 8 and all(isinstance(k, str) for k in keys)

    def test_normalize_round_trip(self, tmp_path, capsys):
        from prestrata.graphs import build_graph
        from prestrata.rationals import QQ, qq_str
        from prestrata.strata import MonomialStratum

        g = build_graph(2, [{1, 2}], [])
        stratum = MonomialStratum(graph=g, psi=((0, ("leg", 1), 1),), kappa=())
        path = tmp_path / "stratum.json"
        path.write_text(json.dumps(stratum.to_json_obj()))
        assert main(["normalize", "--input", str(path)]) == 0
        vector = json.loads(capsys.readouterr().out)
        assert vector["n"] == 2 and vector["degree"] == 1
        by_edges = {
            len(term["stratum"]["graph"]["edges"]): term["coeff"]
            for term in vector["terms"]
        }
        assert by_edges == {0: qq_str(QQ(1, 2)), 1: qq_str(QQ(1, 8))}

    def test_normalize_missing_file_exits_2(self):
        with pytest.raises(SystemExit) as info:
            main(["normalize", "--input", "/nonexistent/stratum.json"])
        assert info.value.code == 2


class TestCliVerifyLocus:
    def test_closed_locus_exits_0(self, capsys):
        code = main(
            ["verify-locus", "--locus", "stable", "--n", "4", "--max-edges", "3"]
        )
        assert code == 0
        assert json.loads(capsys.readouterr().out)["closed"] is True

    def test_json_shape(self, capsys):
        main(
            [
                "verify-locus",
                "--locus",
                "max-nodes=2",
                "--n",
                "0",
                "--max-edges",
                "4",
            ]
        )
        obj = json.loads(capsys.readouterr().out)
        assert obj == {
            "locus": "max-nodes=2",
            "n": 0,
            "max_edges": 4,
            "closed": True,
        }

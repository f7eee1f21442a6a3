import math

import pytest

from tablecomplete.indexstore import build_indexes
from tablecomplete.model import (
    Cell,
    CorpusTable,
    EmptySeedError,
    EntityRecord,
    ScoringParams,
    SeedTable,
)
from tablecomplete.rows import rank_rows, select_row_candidates, suggest_rows

from oracles import oracle_row_candidates, oracle_row_scores


def tiny_kb():
    return [
        EntityRecord(id="E1", label="Alpha", abstract="alpha text", categories=frozenset({"C1"})),
        EntityRecord(id="E5", label="Echo", abstract="echo text", categories=frozenset({"C9"})),
        EntityRecord(id="E9", label="India", abstract="india text", categories=frozenset({"C1"})),
    ]


def table_with(table_id, core, caption="", labels=("Team",)):
    return CorpusTable(
        table_id=table_id,
        caption=caption,
        labels=tuple(labels),
        core_entities=tuple(core),
        cells=tuple((Cell(text=e, entity_id=e),) for e in core),
    )


class TestSelectCandidates:
    def test_empty_seed_raises(self, fixture_bundle, params):
        with pytest.raises(EmptySeedError, match="at least one seed entity"):
            select_row_candidates(SeedTable(), fixture_bundle, params)

    def test_single_category_expansion(self, params):
        bundle = build_indexes([], tiny_kb())
        result = select_row_candidates(SeedTable(entities=("E1",)), bundle, params)
        assert result.candidates == frozenset({"E9"})
        assert result.from_kb == 1
        assert result.from_tc == 0

    def test_core_entities_of_similar_tables_included(self, params):
        bundle = build_indexes([table_with("T1", ["E1", "E5"])], tiny_kb())
        result = select_row_candidates(SeedTable(entities=("E1",)), bundle, params)
        assert "E5" in result.candidates
        assert result.from_tc >= 1

    def test_seed_entities_never_candidates(self, fixture_bundle, params, fixture_seeds):
        for seed in fixture_seeds:
            result = select_row_candidates(seed, fixture_bundle, params)
            assert not (result.candidates & set(seed.entities))

    def test_matches_exhaustive_oracle(self, fixture_corpus, fixture_bundle, params, fixture_seeds):
        tables, entities = fixture_corpus
        for seed in fixture_seeds:
            kb_set, tc_set = oracle_row_candidates(seed, tables, entities, params)
            result = select_row_candidates(seed, fixture_bundle, params)
            assert result.candidates == kb_set | tc_set
            assert result.from_kb == len(kb_set)
            assert result.from_tc == len(tc_set)


class TestRankRows:
    def test_identical_categories_score_one(self, params):
        kb = [
            EntityRecord(id="E1", label="A", abstract="a", categories=frozenset({"C1", "C2"})),
            EntityRecord(id="E2", label="B", abstract="b", categories=frozenset({"C1", "C2"})),
        ]
        bundle = build_indexes([], kb)
        pure_kb = ScoringParams(lambda_e=1.0)
        seed = SeedTable(entities=("E1",))
        suggestions = suggest_rows(seed, bundle, pure_kb, 10)
        assert [s.target for s in suggestions] == ["E2"]
        assert suggestions[0].score == 1.0

    def test_tc_cooccurrence_orders_candidates(self, params):
        kb = [
            EntityRecord(id=f"E{i}", label=f"N{i}", abstract="text", categories=frozenset({"C1"}))
            for i in range(1, 5)
        ]
        tables = [
            table_with("T1", ["E1", "E2"]),
            table_with("T2", ["E1", "E3"]),
            table_with("T3", ["E1", "E2"]),
        ]
        bundle = build_indexes(tables, kb)
        pure_tc = ScoringParams(lambda_e=0.0)
        suggestions = suggest_rows(SeedTable(entities=("E1",)), bundle, pure_tc, 10)
        scores = {s.target: s.score for s in suggestions}
        assert scores["E2"] > scores["E3"] > scores["E4"] == 0.0

    def test_matches_oracle_on_fixture(self, fixture_corpus, fixture_bundle, params, fixture_seeds):
        tables, entities = fixture_corpus
        for seed in fixture_seeds[:8]:
            candidates = select_row_candidates(seed, fixture_bundle, params)
            suggestions = rank_rows(seed, candidates, fixture_bundle, params, len(candidates.candidates))
            expected = oracle_row_scores(
                seed, sorted(candidates.candidates), tables, entities, params
            )
            for s in suggestions:
                es, ll, cl, score = expected[s.target]
                assert math.isclose(s.score, score, rel_tol=1e-9, abs_tol=1e-300)
                assert math.isclose(s.components["entity-similarity"], es, rel_tol=1e-9)
                assert math.isclose(s.components["label-likelihood"], ll, rel_tol=1e-9)
                assert math.isclose(s.components["caption-likelihood"], cl, rel_tol=1e-9)
            expected_order = sorted(expected, key=lambda e: (-expected[e][3], e))
            assert [s.target for s in suggestions] == expected_order

    def test_limit_zero_returns_empty(self, fixture_bundle, params):
        seed = SeedTable(entities=("E01",))
        candidates = select_row_candidates(seed, fixture_bundle, params)
        assert rank_rows(seed, candidates, fixture_bundle, params, 0) == []

    def test_never_returns_seed_entity(self, fixture_bundle, params, fixture_seeds):
        for seed in fixture_seeds:
            for s in suggest_rows(seed, fixture_bundle, params, 50):
                assert s.target not in seed.entities

    def test_targets_come_from_candidate_set(self, fixture_bundle, params, fixture_seeds):
        for seed in fixture_seeds[:5]:
            candidates = select_row_candidates(seed, fixture_bundle, params)
            for s in rank_rows(seed, candidates, fixture_bundle, params, 100):
                assert s.target in candidates.candidates

    def test_deterministic(self, fixture_bundle, params, fixture_seeds):
        seed = fixture_seeds[0]
        first = suggest_rows(seed, fixture_bundle, params, 20)
        second = suggest_rows(seed, fixture_bundle, params, 20)
        assert first == second

    def test_bare_seed_reduces_to_entity_similarity(self, fixture_bundle, params, fixture_seeds):
        for seed in fixture_seeds[:5]:
            bare = SeedTable(caption="", entities=seed.entities, labels=())
            suggestions = suggest_rows(bare, fixture_bundle, params, 100)
            for s in suggestions:
                assert s.components["label-likelihood"] == 1.0
                assert s.components["caption-likelihood"] == 1.0
                assert s.score == s.components["entity-similarity"]

    def test_any_seed_denominator_flag(self, params):
        kb = [
            EntityRecord(id=f"E{i}", label=f"N{i}", abstract="text", categories=frozenset())
            for i in range(1, 5)
        ]
        tables = [
            table_with("T1", ["E1", "E3"]),
            table_with("T2", ["E2", "E3"]),
            table_with("T3", ["E2", "E4"]),
        ]
        bundle = build_indexes(tables, kb)
        seed = SeedTable(entities=("E1", "E2"))
        strict = suggest_rows(seed, bundle, ScoringParams(lambda_e=0.0), 10)
        assert all(s.score == 0.0 for s in strict)  # no table holds both seeds
        relaxed = suggest_rows(
            seed, bundle, ScoringParams(lambda_e=0.0, tc_any_seed=True), 10
        )
        scores = {s.target: s.score for s in relaxed}
        assert math.isclose(scores["E3"], 2 / 3, rel_tol=1e-12)
        assert math.isclose(scores["E4"], 1 / 3, rel_tol=1e-12)

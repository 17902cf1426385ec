import itertools
import math
import statistics

import numpy as np
import pytest

from aidapub import (
    AidaSentence,
    ClusterParams,
    CorpusTooSmall,
    cluster_corpus,
    cluster_point,
    collect_assertion_triples,
    encode_uri,
    local_environment,
    orthogonal_corpus,
    parse_trig,
    serialize_trig,
    synthetic_paraphrase_corpus,
    vectors_from_sentences,
)
from aidapub.clustering import _kmeans
from aidapub.rdf import NPX_HAS_RELATED_MEANING
from aidapub.tfidf import SentenceVector


def vec(uri: str, weights: dict[str, float]) -> SentenceVector:
    norm = math.sqrt(sum(w * w for w in weights.values()))
    return SentenceVector(uri, {t: w / norm for t, w in weights.items()}, 1.0)


def brute_distance(a: SentenceVector, b: SentenceVector) -> float:
    dot = sum(w * b.weights.get(t, 0.0) for t, w in a.weights.items())
    return 1.0 - dot


def planted_vectors(sizes: tuple[int, ...], spread: float = 0.25):
    """Hand-placed unit vectors: group g lives in its own 2-d coordinate
    block, points fan out by a small angle. Inter-group distance is exactly 1
    (orthogonal blocks), intra-group distance at most 1 - cos(spread)."""
    vectors = {}
    groups = {}
    for g, size in enumerate(sizes):
        for i in range(size):
            theta = spread * i / max(size - 1, 1)
            uri = f"urn:test:g{g}p{i}"
            vectors[uri] = vec(uri, {f"g{g}a": math.cos(theta), f"g{g}b": math.sin(theta)})
            groups[uri] = g
    return vectors, groups


def assert_separation(vectors, groups, factor: float = 2.0):
    intra, inter = [], []
    for a, b in itertools.combinations(vectors, 2):
        d = brute_distance(vectors[a], vectors[b])
        (intra if groups[a] == groups[b] else inter).append(d)
    assert min(inter) > factor * max(intra), "fixture is not separated enough"


class TestLocalEnvironment:
    def five_points(self):
        return {
            "urn:t:a": vec("urn:t:a", {"x": 1.0}),
            "urn:t:b": vec("urn:t:b", {"x": 0.8, "y": 0.6}),
            "urn:t:c": vec("urn:t:c", {"y": 1.0}),
            "urn:t:d": vec("urn:t:d", {"x": 0.6, "y": 0.8}),
            "urn:t:e": vec("urn:t:e", {"z": 1.0}),
        }

    def brute_force_env(self, vectors, base, n1, n2):
        def nearest(uri, m):
            ranked = sorted(
                (brute_distance(vectors[uri], other), other_uri)
                for other_uri, other in vectors.items()
                if other_uri != uri
            )
            return [u for _, u in ranked[:m]]

        env = {base, *nearest(base, n1)}
        for neighbor in nearest(base, n1):
            env.update(nearest(neighbor, n2))
        return env

    def test_matches_brute_force_on_hand_placed_points(self):
        vectors = self.five_points()
        params = ClusterParams(n1=3, n2=1)
        for base in vectors:
            expected = self.brute_force_env(vectors, base, 3, 1)
            assert local_environment(base, vectors, params) == expected

    def test_second_level_empty(self):
        vectors = self.five_points()
        params = ClusterParams(n1=3, n2=0)
        env = local_environment("urn:t:a", vectors, params)
        assert env == {"urn:t:a", *self.brute_force_env(vectors, "urn:t:a", 3, 0)}

    def test_corpus_too_small(self):
        vectors = self.five_points()
        with pytest.raises(CorpusTooSmall):
            local_environment("urn:t:a", vectors, ClusterParams(n1=5, n2=1))

    def test_zero_distance_twin_always_included(self):
        vectors = self.five_points()
        vectors["urn:t:a2"] = vec("urn:t:a2", {"x": 2.0})  # same direction as a
        env = local_environment("urn:t:a", vectors, ClusterParams(n1=3, n2=0))
        assert "urn:t:a2" in env


class TestKmeans:
    def test_deterministic_given_generator(self):
        points = np.random.default_rng(3).normal(size=(30, 4))
        labels_a, _, _ = _kmeans(points, 3, np.random.default_rng(9), 100)
        labels_b, _, _ = _kmeans(points, 3, np.random.default_rng(9), 100)
        assert np.array_equal(labels_a, labels_b)

    def test_wcss_non_increasing_without_reseeds(self):
        rng = np.random.default_rng(5)
        for trial in range(20):
            points = rng.normal(size=(25, 3))
            labels, history, reseeds = _kmeans(points, 3, np.random.default_rng(trial), 100)
            if reseeds == 0:
                assert all(b <= a + 1e-9 for a, b in zip(history, history[1:]))

    def test_terminates_within_max_iterations(self):
        points = np.random.default_rng(1).normal(size=(40, 5))
        labels, history, _ = _kmeans(points, 3, np.random.default_rng(2), 100)
        assert len(history) <= 100 and len(labels) == 40

    def test_all_identical_points_form_one_cluster(self):
        points = np.ones((10, 3))
        labels, _, _ = _kmeans(points, 3, np.random.default_rng(0), 100)
        assert len(set(labels.tolist())) == 1


FAMILY = [
    (2, 2, 2),
    (3, 3, 3),
    (4, 4, 4),
    (2, 3, 4),
    (2, 2, 4),
    (3, 3, 4),
    (2, 3, 3),
    (4, 4, 3),
]


class TestClusterPointOracle:
    @pytest.mark.parametrize("sizes", FAMILY, ids=str)
    def test_recovers_ground_truth_group_for_every_base(self, sizes):
        vectors, groups = planted_vectors(sizes)
        assert_separation(vectors, groups)
        params = ClusterParams(n1=len(vectors) - 1, n2=2)
        for base in vectors:
            cluster = cluster_point(base, vectors, params, seed=42)
            expected = {u for u, g in groups.items() if g == groups[base]}
            assert not cluster.is_isolate, base
            assert cluster.members == expected, base
            expected_median = statistics.median(
                brute_distance(vectors[base], vectors[u]) for u in expected if u != base
            )
            assert cluster.median_distance == pytest.approx(expected_median, abs=1e-9)

    def test_base_in_members_and_isolate_rule_literal(self):
        vectors, _ = planted_vectors((4, 4, 4))
        params = ClusterParams(n1=len(vectors) - 1, n2=2)
        for base in vectors:
            cluster = cluster_point(base, vectors, params, seed=42)
            assert cluster.is_isolate == (
                cluster.median_distance > params.tau or len(cluster.members) == 0
            )
            if not cluster.is_isolate:
                assert base in cluster.members

    def test_orthogonal_point_is_isolate(self):
        vectors, groups = planted_vectors((4, 4, 3))
        lone = vec("urn:test:lone", {"solo": 1.0})
        vectors["urn:test:lone"] = lone
        params = ClusterParams(n1=len(vectors) - 1, n2=2)
        cluster = cluster_point("urn:test:lone", vectors, params, seed=42)
        assert cluster.is_isolate and cluster.members == frozenset()


class TestClusterCorpus:
    def test_synthetic_corpus_recovery(self):
        sentences, truth = synthetic_paraphrase_corpus(5, 10, seed=7)
        vectors = vectors_from_sentences(sentences)
        clusters, pairs = cluster_corpus(vectors, ClusterParams(), seed=42)
        assert len(clusters) == 50
        assert pairs
        purity = sum(1 for a, b in pairs if truth[a] == truth[b]) / len(pairs)
        assert purity >= 0.95
        connected = {u for a, b in pairs if truth[a] == truth[b] for u in (a, b)}
        assert len(connected) / len(vectors) >= 0.80

    def test_determinism_under_fixed_seed(self):
        sentences, _ = synthetic_paraphrase_corpus(3, 8, seed=2)
        vectors = vectors_from_sentences(sentences)
        params = ClusterParams(n1=10, n2=5)
        assert cluster_corpus(vectors, params, seed=42) == cluster_corpus(vectors, params, seed=42)

    def test_orthogonal_corpus_all_isolates(self):
        vectors = vectors_from_sentences(orthogonal_corpus(25))
        clusters, pairs = cluster_corpus(vectors, ClusterParams(), seed=42)
        assert all(c.is_isolate for c in clusters)
        assert pairs == []

    def test_duplicate_corpus_zero_isolates(self):
        words = ["alpha", "beta", "gamma", "delta", "binds"]
        texts = []
        for perm in itertools.permutations(words):
            texts.append(" ".join(perm).capitalize() + ".")
            if len(texts) == 25:
                break
        vectors = vectors_from_sentences([AidaSentence(t) for t in texts])
        clusters, _ = cluster_corpus(vectors, ClusterParams(), seed=42)
        assert all(not c.is_isolate for c in clusters)
        assert all(c.median_distance == pytest.approx(0.0, abs=1e-9) for c in clusters)

    def test_sbp_paraphrase_pair_is_a_candidate(self):
        s1 = AidaSentence(
            "Hepatic reticuloendothelial function is impaired to the same degree in "
            "cirrhotic patients with or without a previous history of SBP."
        )
        s2 = AidaSentence(
            "History of spontaneous bacterial peritonitis does not affect impairment "
            "of hepatic reticuloendothelial function in cirrhotic patients."
        )
        base, _ = synthetic_paraphrase_corpus(5, 10, seed=7)
        vectors = vectors_from_sentences(base + [s1, s2])
        _, pairs = cluster_corpus(vectors, ClusterParams(), seed=42)
        assert tuple(sorted((encode_uri(s1), encode_uri(s2)))) in set(pairs)

    def test_corpus_too_small(self):
        sentences, _ = synthetic_paraphrase_corpus(1, 5, seed=1)
        vectors = vectors_from_sentences(sentences)
        with pytest.raises(CorpusTooSmall):
            cluster_corpus(vectors, ClusterParams(), seed=42)


class TestRelationNanopubs:
    def test_one_nanopub_per_pair_with_single_triple(self, bot_prov, malaria):
        from aidapub import emit_relation_nanopubs

        other = AidaSentence("Mosquitoes spread malaria parasites.")
        pair = (encode_uri(malaria), encode_uri(other))
        (np,) = emit_relation_nanopubs([pair], bot_prov)
        triples = collect_assertion_triples(np)
        assert len(triples) == 1
        (triple,) = triples
        assert triple.predicate == NPX_HAS_RELATED_MEANING
        assert {triple.subject.value, triple.object.value} == set(pair)

    def test_roundtrip_preserves_relation(self, bot_prov, malaria):
        from aidapub import emit_relation_nanopubs

        other = AidaSentence("Mosquitoes spread malaria parasites.")
        (np,) = emit_relation_nanopubs([(encode_uri(malaria), encode_uri(other))], bot_prov)
        (back,) = parse_trig(serialize_trig(np))
        assert collect_assertion_triples(back) == collect_assertion_triples(np)

    def test_parameter_digest_recorded(self, bot_prov, malaria):
        from aidapub import emit_relation_nanopubs
        from aidapub.rdf import NPX_HAS_PARAMETER_DIGEST

        other = AidaSentence("Mosquitoes spread malaria parasites.")
        (np,) = emit_relation_nanopubs(
            [(encode_uri(malaria), encode_uri(other))], bot_prov, ClusterParams(), seed=42
        )
        prov_graph = next(g for name, g in np.graphs.items() if name.endswith(".Provenance"))
        assert any(t.predicate == NPX_HAS_PARAMETER_DIGEST for t in prov_graph.triples)

    def test_non_bot_channel_rejected(self, curator_prov):
        from aidapub import emit_relation_nanopubs

        with pytest.raises(ValueError):
            emit_relation_nanopubs([], curator_prov)


class TestParams:
    @pytest.mark.parametrize(
        "kwargs",
        [
            {"n1": 2, "k": 3},
            {"repetitions": 0},
            {"tau": 0.0},
            {"co_membership_quorum": 0.0},
            {"co_membership_quorum": 1.5},
        ],
    )
    def test_invalid_params(self, kwargs):
        with pytest.raises(ValueError):
            ClusterParams(**kwargs)

    def test_digest_depends_on_seed(self):
        params = ClusterParams()
        assert params.digest(1) != params.digest(2)

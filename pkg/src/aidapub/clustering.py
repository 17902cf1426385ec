"""Local sentence clustering over tf-idf vectors.

For a base sentence X the algorithm builds a two-level nearest-neighbor
environment U_X, repeatedly partitions U_X with k-means (k=3, deterministic
farthest-point seeding), keeps as cluster members the points that share X's
cluster in at least a quorum of the runs, and computes the median cosine
distance from X to the other members. If that median exceeds the threshold
(or nobody joins X), X is an isolate and the cluster is discarded. Co-members
of surviving clusters become candidate sentence-relation pairs.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

import numpy as np

from .aida import AidaSentence, encode_uri
from .nanopub import Channel, Nanopublication, Provenance, build_meta_nanopub
from .rdf import NPX_HAS_PARAMETER_DIGEST, NPX_HAS_RELATED_MEANING, Iri, Literal, Triple
from .tfidf import SentenceVector, tfidf_fit


class CorpusTooSmall(ValueError):
    pass


@dataclass(frozen=True)
class ClusterParams:
    n1: int = 20
    n2: int = 10
    k: int = 3
    repetitions: int = 10
    tau: float = 0.65
    co_membership_quorum: float = 0.5
    max_iterations: int = 100

    def __post_init__(self) -> None:
        if self.n1 < self.k:
            raise ValueError("n1 must be at least k")
        if self.repetitions < 1:
            raise ValueError("need at least one repetition")
        if self.tau <= 0:
            raise ValueError("threshold must be positive")
        if not 0 < self.co_membership_quorum <= 1:
            raise ValueError("quorum must be in (0, 1]")

    def digest(self, seed: int) -> str:
        text = (
            f"n1={self.n1};n2={self.n2};k={self.k};r={self.repetitions};"
            f"tau={self.tau!r};quorum={self.co_membership_quorum!r};seed={seed}"
        )
        return hashlib.sha256(text.encode("utf-8")).hexdigest()[:16]


@dataclass(frozen=True)
class Cluster:
    base: str
    members: frozenset[str]
    median_distance: float
    is_isolate: bool


def vectors_from_sentences(sentences: list[AidaSentence]) -> dict[str, SentenceVector]:
    """Fit tf-idf on the sentences and key the vectors by sentence URI.
    Textually identical sentences collapse onto one point."""
    model = tfidf_fit(sentences)
    vectors: dict[str, SentenceVector] = {}
    for sentence in sentences:
        uri = encode_uri(sentence)
        if uri not in vectors:
            vectors[uri] = model.transform(sentence)
    return vectors


class _NeighborCache:
    """Per-corpus cache of distance rankings. Ties break on URI order."""

    def __init__(self, vectors: dict[str, SentenceVector]) -> None:
        self.vectors = vectors
        self._ranked: dict[str, list[tuple[float, str]]] = {}

    def distance(self, a: str, b: str) -> float:
        return self.vectors[a].cosine_distance(self.vectors[b])

    def nearest(self, uri: str, count: int) -> list[str]:
        ranked = self._ranked.get(uri)
        if ranked is None:
            vec = self.vectors[uri]
            ranked = sorted(
                (vec.cosine_distance(other), other_uri)
                for other_uri, other in self.vectors.items()
                if other_uri != uri
            )
            self._ranked[uri] = ranked
        return [u for _, u in ranked[:count]]


def _local_environment(uri: str, cache: _NeighborCache, params: ClusterParams) -> list[str]:
    vectors = cache.vectors
    if uri not in vectors:
        raise KeyError(f"unknown sentence {uri}")
    if len(vectors) <= params.n1:
        raise CorpusTooSmall(
            f"corpus has {len(vectors)} sentences; need more than n1={params.n1}"
        )
    env = {uri}
    first_level = cache.nearest(uri, params.n1)
    env.update(first_level)
    for neighbor in first_level:
        env.update(cache.nearest(neighbor, params.n2))
    return sorted(env)


def local_environment(
    uri: str, vectors: dict[str, SentenceVector], params: ClusterParams
) -> set[str]:
    """U_X: the base point, its n1 nearest neighbors, and each such
    neighbor's n2 nearest neighbors."""
    return set(_local_environment(uri, _NeighborCache(vectors), params))


def _dense_matrix(uris: list[str], vectors: dict[str, SentenceVector]) -> np.ndarray:
    terms = sorted({t for u in uris for t in vectors[u].weights})
    index = {t: i for i, t in enumerate(terms)}
    matrix = np.zeros((len(uris), max(len(terms), 1)))
    for row, uri in enumerate(uris):
        for term, weight in vectors[uri].weights.items():
            matrix[row, index[term]] = weight
    return matrix


def _kmeans(
    points: np.ndarray, k: int, rng: np.random.Generator, max_iterations: int
) -> tuple[np.ndarray, list[float], int]:
    """Lloyd iterations with k-means++ seeding (first centroid uniform, later
    ones sampled proportionally to squared distance from the chosen set).
    Returns (labels, WCSS per iteration, number of empty-cluster reseeds).
    Deterministic given the generator state; assignment ties resolve to the
    lowest index."""
    n = len(points)
    k = min(k, n)
    chosen = [int(rng.integers(n))]
    spread = ((points - points[chosen[0]]) ** 2).sum(axis=1)
    for _ in range(1, k):
        total = float(spread.sum())
        if total > 0.0:
            idx = int(rng.choice(n, p=spread / total))
        else:
            idx = int(rng.integers(n))
        chosen.append(idx)
        spread = np.minimum(spread, ((points - points[idx]) ** 2).sum(axis=1))
    centroids = points[chosen].astype(float).copy()

    labels: np.ndarray | None = None
    wcss_history: list[float] = []
    reseeds = 0
    for _ in range(max_iterations):
        d2 = ((points[:, None, :] - centroids[None, :, :]) ** 2).sum(axis=2)
        new_labels = np.argmin(d2, axis=1)
        empty = [j for j in range(k) if not np.any(new_labels == j)]
        if empty:
            # Re-seed an empty centroid at the point farthest from where the
            # centroid used to be, then reassign once.
            for j in empty:
                centroids[j] = points[int(np.argmax(d2[:, j]))]
                reseeds += 1
            d2 = ((points[:, None, :] - centroids[None, :, :]) ** 2).sum(axis=2)
            new_labels = np.argmin(d2, axis=1)
        wcss_history.append(float(((points - centroids[new_labels]) ** 2).sum()))
        if labels is not None and np.array_equal(labels, new_labels):
            break
        labels = new_labels
        for j in range(k):
            mask = labels == j
            if np.any(mask):
                centroids[j] = points[mask].mean(axis=0)
    assert labels is not None
    return labels, wcss_history, reseeds


def _point_rng(seed: int, uri: str) -> np.random.Generator:
    uri_hash = int.from_bytes(hashlib.sha256(uri.encode("utf-8")).digest()[:8], "big")
    return np.random.default_rng([seed, uri_hash])


def _cluster_point(
    uri: str, cache: _NeighborCache, params: ClusterParams, seed: int
) -> Cluster:
    env = _local_environment(uri, cache, params)
    matrix = _dense_matrix(env, cache.vectors)
    base_index = env.index(uri)

    rng = _point_rng(seed, uri)
    co_counts = dict.fromkeys(env, 0)
    for _ in range(params.repetitions):
        labels, _, _ = _kmeans(matrix, params.k, rng, params.max_iterations)
        base_label = labels[base_index]
        for i, member in enumerate(env):
            if labels[i] == base_label:
                co_counts[member] += 1

    needed = params.co_membership_quorum * params.repetitions - 1e-9
    members = {u for u, count in co_counts.items() if count >= needed}
    members.add(uri)
    others = sorted(members - {uri})
    if not others:
        return Cluster(uri, frozenset(), float("inf"), True)
    median = float(np.median([cache.distance(uri, other) for other in others]))
    if median > params.tau:
        return Cluster(uri, frozenset(), median, True)
    return Cluster(uri, frozenset(members), median, False)


def cluster_point(
    uri: str,
    vectors: dict[str, SentenceVector],
    params: ClusterParams | None = None,
    seed: int = 42,
) -> Cluster:
    """Cluster the corpus locally around one base sentence."""
    return _cluster_point(uri, _NeighborCache(vectors), params or ClusterParams(), seed)


def cluster_corpus(
    vectors: dict[str, SentenceVector],
    params: ClusterParams | None = None,
    seed: int = 42,
) -> tuple[list[Cluster], list[tuple[str, str]]]:
    """Cluster every sentence and collect the deduplicated unordered
    co-membership pairs as relation candidates."""
    params = params or ClusterParams()
    cache = _NeighborCache(vectors)
    clusters = [_cluster_point(uri, cache, params, seed) for uri in vectors]
    pairs: set[tuple[str, str]] = set()
    for cluster in clusters:
        if cluster.is_isolate:
            continue
        for member in cluster.members:
            if member != cluster.base:
                pairs.add(tuple(sorted((cluster.base, member))))  # type: ignore[arg-type]
    return clusters, sorted(pairs)


def emit_relation_nanopubs(
    pairs: list[tuple[str, str]],
    prov_template: Provenance,
    params: ClusterParams | None = None,
    seed: int = 42,
    salt: str = "",
) -> list[Nanopublication]:
    """One meta-nanopublication per candidate pair, asserting
    hasRelatedMeaning between the two sentence URIs. Provenance names the
    clustering bot and the parameter digest of the run."""
    if prov_template.created_by_channel is not Channel.BOT:
        raise ValueError("relation candidates must be published through the Bot channel")
    digest = (params or ClusterParams()).digest(seed)
    annotations = ((NPX_HAS_PARAMETER_DIGEST, Literal(digest)),)
    return [
        build_meta_nanopub(
            [Triple(Iri(a), NPX_HAS_RELATED_MEANING, Iri(b))],
            prov_template,
            salt=salt,
            prov_annotations=annotations,
        )
        for a, b in pairs
    ]


# ---------------------------------------------------------------------------
# Synthetic corpora for exercising and demonstrating the pipeline
# ---------------------------------------------------------------------------

_SYLLABLES = (
    "ba", "ce", "di", "fo", "gu", "ha", "je", "ki", "lo", "mu",
    "na", "pe", "qui", "ro", "su", "ta", "ve", "wi", "xo", "zu",
)


def _coin_word(rng: np.random.Generator, used: set[str]) -> str:
    while True:
        word = "".join(_SYLLABLES[int(rng.integers(len(_SYLLABLES)))] for _ in range(3))
        if word not in used:
            used.add(word)
            return word


# Balanced pick of (verb, place, qualifier) combinations: each verb and place
# five times, each qualifier twice. Every sentence then has the identical
# tf-idf weight profile, so all cross-group distances are exactly equal and
# no foreign group is systematically "nearer" than another.
_COMBO_ORDER = tuple(
    combo for i in range(5) for combo in ((0, i % 2, i), (1, 1 - i % 2, i))
)


def synthetic_paraphrase_corpus(
    n_groups: int = 5, per_group: int = 10, seed: int = 7
) -> tuple[list[AidaSentence], dict[str, int]]:
    """Planted paraphrase groups with controlled vocabulary overlap: sentences
    in a group share two fixed content words and vary a verb, a tissue word,
    and a qualifier; groups share only the glue words "in" and "cells".
    Returns the sentences and the ground-truth group per sentence URI."""
    if per_group > len(_COMBO_ORDER):
        raise ValueError(f"at most {len(_COMBO_ORDER)} paraphrases per group")
    rng = np.random.default_rng(seed)
    used: set[str] = set()
    sentences: list[AidaSentence] = []
    truth: dict[str, int] = {}
    for group in range(n_groups):
        subject = _coin_word(rng, used)
        obj = _coin_word(rng, used)
        verbs = [_coin_word(rng, used), _coin_word(rng, used)]
        places = [_coin_word(rng, used), _coin_word(rng, used)]
        extras = [_coin_word(rng, used) for _ in range(5)]
        for v, p, e in _COMBO_ORDER[:per_group]:
            text = (
                f"{subject.capitalize()} {verbs[v]} {obj} in {extras[e]} {places[p]} cells."
            )
            sentence = AidaSentence(text)
            sentences.append(sentence)
            truth[encode_uri(sentence)] = group
    return sentences, truth


def orthogonal_corpus(count: int = 25, seed: int = 11) -> list[AidaSentence]:
    """Sentences with pairwise disjoint vocabulary (all cosine distances 1)."""
    rng = np.random.default_rng(seed)
    used: set[str] = set()
    sentences = []
    for _ in range(count):
        words = [_coin_word(rng, used) for _ in range(4)]
        sentences.append(AidaSentence((" ".join(words)).capitalize() + "."))
    return sentences

"""Sentence vectors: tokenization, smoothed tf-idf weighting, cosine distance.

Weights follow tf * (ln((1+N)/(1+df)) + 1) with L2 normalization, so terms
outside the fitted vocabulary still get a (maximal) smoothed idf. Vectors are
sparse maps keyed by term.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

from .aida import AidaSentence


class EmptyCorpus(ValueError):
    pass


_TOKEN = re.compile(r"[^\W_]+(?:['-][^\W_]+)*", re.UNICODE)


def tokenize(sentence: AidaSentence | str) -> list[str]:
    """Lowercased word tokens in order; hyphenated terms and numbers stay
    intact, punctuation is dropped."""
    text = sentence.text if isinstance(sentence, AidaSentence) else sentence
    return _TOKEN.findall(text.lower())


@dataclass(frozen=True)
class SentenceVector:
    sentence_uri: str
    weights: dict[str, float]
    norm: float

    def cosine_similarity(self, other: "SentenceVector") -> float:
        if self.norm == 0.0 or other.norm == 0.0:
            return 0.0
        small, large = self.weights, other.weights
        if len(small) > len(large):
            small, large = large, small
        dot = sum(w * large[t] for t, w in small.items() if t in large)
        return min(1.0, max(0.0, dot))

    def cosine_distance(self, other: "SentenceVector") -> float:
        return 1.0 - self.cosine_similarity(other)


@dataclass(frozen=True)
class TfidfModel:
    document_count: int
    document_frequency: dict[str, int]

    @property
    def vocabulary(self) -> set[str]:
        return set(self.document_frequency)

    def idf(self, term: str) -> float:
        df = self.document_frequency.get(term, 0)
        return math.log((1 + self.document_count) / (1 + df)) + 1.0

    def transform_counts(self, sentence_uri: str, counts: dict[str, int]) -> SentenceVector:
        raw = {term: tf * self.idf(term) for term, tf in counts.items() if tf > 0}
        norm = math.sqrt(sum(w * w for w in raw.values()))
        if norm > 0.0:
            raw = {t: w / norm for t, w in raw.items()}
            return SentenceVector(sentence_uri, raw, 1.0)
        return SentenceVector(sentence_uri, {}, 0.0)

    def transform(self, sentence: AidaSentence) -> SentenceVector:
        counts: dict[str, int] = {}
        for token in tokenize(sentence):
            counts[token] = counts.get(token, 0) + 1
        return self.transform_counts(sentence.uri, counts)

    def transform_text(self, sentence_uri: str, text: str) -> SentenceVector:
        counts: dict[str, int] = {}
        for token in tokenize(text):
            counts[token] = counts.get(token, 0) + 1
        return self.transform_counts(sentence_uri, counts)


def tfidf_fit(corpus: list[AidaSentence]) -> TfidfModel:
    """Vocabulary and document frequencies over the corpus sentences."""
    if not corpus:
        raise EmptyCorpus("cannot fit a tf-idf model on an empty corpus")
    df: dict[str, int] = {}
    for sentence in corpus:
        for term in set(tokenize(sentence)):
            df[term] = df.get(term, 0) + 1
    return TfidfModel(len(corpus), df)


def tfidf_transform(model: TfidfModel, sentence: AidaSentence) -> SentenceVector:
    return model.transform(sentence)

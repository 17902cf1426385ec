import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from aidapub import AidaSentence, EmptyCorpus, tfidf_fit, tfidf_transform, tokenize


class TestTokenize:
    def test_simple_segmentation(self):
        assert tokenize(AidaSentence("Malaria is transmitted by mosquitoes.")) == [
            "malaria", "is", "transmitted", "by", "mosquitoes",
        ]

    def test_hyphens_and_numbers_kept(self):
        assert tokenize(AidaSentence("X-linked gene A2 binds DNA.")) == [
            "x-linked", "gene", "a2", "binds", "dna",
        ]

    def test_single_token(self):
        assert tokenize(AidaSentence("A.")) == ["a"]


class TestFit:
    def test_single_document(self):
        model = tfidf_fit([AidaSentence("Gene binds protein.")])
        assert model.document_count == 1
        assert model.document_frequency == {"gene": 1, "binds": 1, "protein": 1}

    def test_vocabulary_covers_all_tokens(self):
        corpus = [
            AidaSentence("Alpha binds beta."),
            AidaSentence("Gamma inhibits delta."),
            AidaSentence("Alpha regulates gamma."),
        ]
        model = tfidf_fit(corpus)
        assert model.vocabulary == {
            "alpha", "binds", "beta", "gamma", "inhibits", "delta", "regulates",
        }

    def test_refit_identical(self):
        corpus = [AidaSentence("Alpha binds beta."), AidaSentence("Beta binds alpha.")]
        assert tfidf_fit(corpus) == tfidf_fit(corpus)

    def test_empty_corpus(self):
        with pytest.raises(EmptyCorpus):
            tfidf_fit([])


class TestTransform:
    def test_weight_formula_hand_computed(self):
        # 3 documents; "alpha" appears twice in doc 1 and nowhere else:
        # raw weight = tf * (ln((1+N)/(1+df)) + 1) = 2 * (ln(4/2) + 1)
        corpus = [
            AidaSentence("Alpha alpha binds."),
            AidaSentence("Beta binds."),
            AidaSentence("Gamma binds."),
        ]
        model = tfidf_fit(corpus)
        expected_alpha = 2 * (math.log(4 / 2) + 1)  # = 3.386294361119891
        expected_binds = 1 * (math.log(4 / 4) + 1)
        vec = tfidf_transform(model, corpus[0])
        norm = math.sqrt(expected_alpha**2 + expected_binds**2)
        assert vec.weights["alpha"] == pytest.approx(3.386294361119891 / norm)
        assert vec.weights["binds"] == pytest.approx(expected_binds / norm)
        assert vec.norm == pytest.approx(1.0, abs=1e-9)

    def test_identical_sentences_distance_zero(self):
        corpus = [AidaSentence("Alpha binds beta."), AidaSentence("Gamma binds delta.")]
        model = tfidf_fit(corpus)
        a = model.transform(corpus[0])
        b = model.transform(AidaSentence("Alpha binds beta."))
        assert a.cosine_distance(b) == pytest.approx(0.0, abs=1e-12)

    def test_disjoint_sentences_distance_one(self):
        corpus = [AidaSentence("Alpha binds beta."), AidaSentence("Gamma inhibits delta.")]
        model = tfidf_fit(corpus)
        a, b = (model.transform(s) for s in corpus)
        assert a.cosine_similarity(b) == 0.0
        assert a.cosine_distance(b) == 1.0

    def test_out_of_vocabulary_terms_get_smoothed_idf(self):
        model = tfidf_fit([AidaSentence("Alpha binds beta.")])
        vec = model.transform(AidaSentence("Zeta binds."))
        assert "zeta" in vec.weights  # df 0 -> idf = ln((1+N)/1) + 1, still positive
        assert vec.norm == pytest.approx(1.0)

    def test_token_empty_sentence_gives_zero_vector(self):
        model = tfidf_fit([AidaSentence("Alpha binds beta.")])
        vec = model.transform_text("urn:ex:q", "???")
        assert vec.weights == {} and vec.norm == 0.0
        assert vec.cosine_distance(model.transform(AidaSentence("Alpha binds beta."))) == 1.0


TERMS = st.sampled_from(["alpha", "beta", "gamma", "delta", "epsilon"])


@settings(max_examples=100, deadline=None)
@given(
    counts=st.dictionaries(TERMS, st.integers(1, 6), min_size=1),
    scale=st.integers(2, 9),
)
def test_scaling_invariance(counts, scale):
    """Multiplying all raw term counts by a constant leaves the normalized
    vector, hence every cosine distance, unchanged."""
    model = tfidf_fit(
        [AidaSentence("Alpha binds beta."), AidaSentence("Gamma inhibits delta.")]
    )
    base = model.transform_counts("urn:ex:v", counts)
    scaled = model.transform_counts("urn:ex:v", {t: c * scale for t, c in counts.items()})
    assert set(base.weights) == set(scaled.weights)
    for term, weight in base.weights.items():
        assert scaled.weights[term] == pytest.approx(weight, abs=1e-12)


@settings(max_examples=100, deadline=None)
@given(
    a=st.dictionaries(TERMS, st.integers(1, 6), min_size=1),
    b=st.dictionaries(TERMS, st.integers(1, 6), min_size=1),
)
def test_cosine_distance_properties(a, b):
    model = tfidf_fit([AidaSentence("Alpha beta gamma delta epsilon mix.")])
    va = model.transform_counts("urn:ex:a", a)
    vb = model.transform_counts("urn:ex:b", b)
    assert va.cosine_distance(va) == pytest.approx(0.0, abs=1e-9)
    assert va.cosine_distance(vb) == pytest.approx(vb.cosine_distance(va))
    assert 0.0 <= va.cosine_distance(vb) <= 1.0

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from aidapub import (
    AIDA_PREFIX,
    AidaSentence,
    BadPrefix,
    DecodedTextNotAida,
    InvalidSentence,
    MalformedEscape,
    decode_uri,
    encode_uri,
    is_aida_uri,
)
from conftest import MALARIA, MALARIA_URI
from gen import random_sentence


class TestSentenceInvariants:
    def test_valid(self):
        assert AidaSentence("A.").text == "A."

    @pytest.mark.parametrize(
        "text",
        [
            "",
            " Leading space.",
            "Trailing space. ",
            "No full stop",
            "Two stops..",
            "Line\nbreak.",
            "Tab\tchar.",
            "Control\x07char.",
            "x" * 500 + ".",
        ],
    )
    def test_invalid(self, text):
        with pytest.raises(InvalidSentence):
            AidaSentence(text)

    def test_nfc_normalization(self):
        composed = AidaSentence("Café closes.")
        decomposed = AidaSentence("Café closes.")
        assert composed == decomposed
        assert encode_uri(composed) == encode_uri(decomposed)


class TestEncode:
    def test_paper_example(self, malaria):
        assert encode_uri(malaria) == MALARIA_URI

    def test_single_token(self):
        assert encode_uri(AidaSentence("A.")) == AIDA_PREFIX + "A."

    def test_plus_is_escaped(self):
        # Derived by applying the encoding table character by character:
        # spaces -> '+', literal '+' -> %2B, everything in the unreserved
        # set passes through.
        uri = encode_uri(AidaSentence("Protein X + cofactor binds DNA."))
        assert uri == AIDA_PREFIX + "Protein+X+%2B+cofactor+binds+DNA."

    def test_unreserved_set_passes_through(self):
        uri = encode_uri(AidaSentence("Part (a-b) of x_1.txt holds."))
        assert uri == AIDA_PREFIX + "Part+(a-b)+of+x_1.txt+holds."

    def test_utf8_uppercase_hex(self):
        uri = encode_uri(AidaSentence("Café closes."))
        assert uri == AIDA_PREFIX + "Caf%C3%A9+closes."

    def test_no_raw_space(self):
        uri = encode_uri(AidaSentence("One two three."))
        assert " " not in uri and uri.startswith(AIDA_PREFIX)


class TestDecode:
    def test_paper_example(self):
        assert decode_uri(MALARIA_URI).text == MALARIA

    def test_inverse_of_derived_encoding(self):
        assert (
            decode_uri(AIDA_PREFIX + "Protein+X+%2B+cofactor+binds+DNA.").text
            == "Protein X + cofactor binds DNA."
        )

    def test_bad_prefix(self):
        with pytest.raises(BadPrefix):
            decode_uri("http://example.org/x")

    @pytest.mark.parametrize("tail", ["Bad%2.", "Bad%zz.", "Trunc%e9."])
    def test_malformed_escape(self, tail):
        with pytest.raises(MalformedEscape):
            decode_uri(AIDA_PREFIX + tail)

    def test_decoded_text_not_a_sentence(self):
        with pytest.raises(DecodedTextNotAida):
            decode_uri(AIDA_PREFIX + "No+stop")

    def test_is_aida_uri(self):
        assert is_aida_uri(MALARIA_URI)
        assert not is_aida_uri("urn:ex:x")


@settings(max_examples=300, deadline=None)
@given(
    st.text(
        alphabet=st.characters(
            whitelist_categories=("L", "N", "P", "S", "Zs"),
            blacklist_characters="  ",
        ),
        min_size=0,
        max_size=120,
    )
)
def test_codec_bijective_property(body):
    text = (body.strip().rstrip(".").strip() or "X") + "."
    sentence = AidaSentence(text)
    uri = encode_uri(sentence)
    assert uri.startswith(AIDA_PREFIX) and " " not in uri
    assert decode_uri(uri) == sentence
    assert encode_uri(decode_uri(uri)) == uri


def test_codec_bijective_seeded_sample():
    rng = random.Random(20260810)
    for _ in range(500):
        sentence = random_sentence(rng)
        assert decode_uri(encode_uri(sentence)) == sentence

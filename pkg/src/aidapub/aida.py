"""AIDA claim sentences and their reversible URI encoding.

An AIDA sentence is a single English claim sentence (atomic, independent,
declarative, absolute). Every sentence owns a URI under a fixed prefix from
which the exact sentence text can be recovered without any lookup, and the
mapping is bijective on valid sentences.
"""

from __future__ import annotations

import re
import unicodedata
from dataclasses import dataclass
from urllib.parse import quote_plus

AIDA_PREFIX = "http://purl.org/aida/"

#: Characters that pass through the encoder unescaped (plus the space -> "+"
#: rule). Everything else is percent-encoded as uppercase-hex UTF-8.
UNRESERVED = "()"  # urllib already never touches [A-Za-z0-9_.~-]

MAX_SENTENCE_LENGTH = 500

_HEX_ESCAPE = re.compile(r"%[0-9A-Fa-f]{2}")


class InvalidSentence(ValueError):
    """The text does not satisfy the surface invariants of a claim sentence."""


class AidaCodecError(ValueError):
    """Base class for URI decoding failures."""


class BadPrefix(AidaCodecError):
    """URI does not start with the fixed sentence-URI prefix."""


class MalformedEscape(AidaCodecError):
    """URI contains a '%' escape that is not two hex digits or bad UTF-8."""


class DecodedTextNotAida(AidaCodecError):
    """URI decodes, but the decoded text is not a valid sentence."""


@dataclass(frozen=True, slots=True)
class AidaSentence:
    """A validated claim sentence in canonical (NFC) form.

    Raises InvalidSentence when the text is empty, padded with whitespace,
    contains line breaks or control characters, does not end with exactly
    one full stop, or exceeds the length cap.
    """

    text: str

    def __init__(self, text: str) -> None:
        normalized = unicodedata.normalize("NFC", text)
        _check_sentence_text(normalized)
        object.__setattr__(self, "text", normalized)

    def __str__(self) -> str:
        return self.text

    @property
    def uri(self) -> str:
        return encode_uri(self)


def _check_sentence_text(text: str) -> None:
    if not text:
        raise InvalidSentence("sentence is empty")
    if text != text.strip():
        raise InvalidSentence("sentence has leading or trailing whitespace")
    for ch in text:
        if unicodedata.category(ch) == "Cc" or ch in "  ":
            raise InvalidSentence(
                f"sentence contains a control character U+{ord(ch):04X}"
            )
    if not text.endswith("."):
        raise InvalidSentence("sentence must end with a full stop")
    if len(text) >= 2 and text[-2] == ".":
        raise InvalidSentence("sentence must end with exactly one full stop")
    if len(text) > MAX_SENTENCE_LENGTH:
        raise InvalidSentence(
            f"sentence exceeds {MAX_SENTENCE_LENGTH} characters ({len(text)})"
        )


def encode_uri(sentence: AidaSentence) -> str:
    """Encode a sentence as its URI: spaces become "+", the characters
    [A-Za-z0-9._~()-] pass through, everything else (including literal "+")
    is percent-encoded as uppercase-hex UTF-8 bytes."""
    return AIDA_PREFIX + quote_plus(sentence.text, safe=UNRESERVED)


def is_aida_uri(uri: str) -> bool:
    """True when the string decodes as a sentence URI."""
    try:
        decode_uri(uri)
    except AidaCodecError:
        return False
    return True


def decode_uri(uri: str) -> AidaSentence:
    """Recover the sentence from its URI. Exact inverse of encode_uri on
    canonically encoded URIs."""
    if not uri.startswith(AIDA_PREFIX):
        raise BadPrefix(f"not an AIDA sentence URI: {uri!r}")
    encoded = uri[len(AIDA_PREFIX):]
    text = _decode_body(encoded)
    try:
        return AidaSentence(text)
    except InvalidSentence as exc:
        raise DecodedTextNotAida(f"decoded text is not a valid sentence: {exc}") from exc


def _decode_body(encoded: str) -> str:
    out = bytearray()
    i = 0
    n = len(encoded)
    while i < n:
        ch = encoded[i]
        if ch == "+":
            out.extend(b" ")
            i += 1
        elif ch == "%":
            if not _HEX_ESCAPE.match(encoded, i):
                raise MalformedEscape(f"bad percent escape at offset {i} in {encoded!r}")
            out.append(int(encoded[i + 1 : i + 3], 16))
            i += 3
        else:
            out.extend(ch.encode("utf-8"))
            i += 1
    try:
        return out.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise MalformedEscape(f"percent escapes are not valid UTF-8: {exc}") from exc

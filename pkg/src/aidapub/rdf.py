"""Minimal RDF data model: terms, triples, named graphs, and the vocabulary
IRIs used by the nanopublication layer."""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union

_SCHEME = re.compile(r"^[A-Za-z][A-Za-z0-9+.-]*:")
_IRI_FORBIDDEN = re.compile(r'[\x00-\x20<>"{}|^`\\]')


@dataclass(frozen=True, slots=True)
class Iri:
    value: str

    def __post_init__(self) -> None:
        if not _SCHEME.match(self.value):
            raise ValueError(f"IRI is not absolute: {self.value!r}")
        if _IRI_FORBIDDEN.search(self.value):
            raise ValueError(f"IRI contains forbidden characters: {self.value!r}")

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True, slots=True)
class Literal:
    lexical: str
    datatype: str | None = None
    language: str | None = None

    def __post_init__(self) -> None:
        if self.datatype is not None and self.language is not None:
            raise ValueError("a literal has either a datatype or a language tag, not both")


@dataclass(frozen=True, slots=True)
class BlankNode:
    label: str

    def __post_init__(self) -> None:
        if not re.fullmatch(r"[A-Za-z0-9_][A-Za-z0-9_.-]*", self.label):
            raise ValueError(f"bad blank node label: {self.label!r}")


Term = Union[Iri, Literal, BlankNode]


@dataclass(frozen=True, slots=True)
class Triple:
    subject: Iri | BlankNode
    predicate: Iri
    object: Term

    def __post_init__(self) -> None:
        # RDF literals cannot stand as subjects.
        if isinstance(self.subject, Literal):
            raise ValueError("literal in subject position")
        if not isinstance(self.predicate, Iri):
            raise ValueError("predicate must be an IRI")


def term_sort_key(term: Term) -> tuple:
    if isinstance(term, Iri):
        return (0, term.value, "", "")
    if isinstance(term, BlankNode):
        return (1, term.label, "", "")
    return (2, term.lexical, term.datatype or "", term.language or "")


def triple_sort_key(t: Triple) -> tuple:
    return (term_sort_key(t.subject), term_sort_key(t.predicate), term_sort_key(t.object))


@dataclass(frozen=True, slots=True)
class NamedGraph:
    name: str
    triples: frozenset[Triple]

    def __init__(self, name: str, triples=()) -> None:
        object.__setattr__(self, "name", Iri(name).value)
        object.__setattr__(self, "triples", frozenset(triples))

    def sorted_triples(self) -> list[Triple]:
        return sorted(self.triples, key=triple_sort_key)

    def __len__(self) -> int:
        return len(self.triples)


# ---------------------------------------------------------------------------
# Namespaces. np: is the nanopublication schema; npx: holds the sentence
# extension terms; aida: is the sentence-URI prefix.
# ---------------------------------------------------------------------------

NP = "http://www.nanopub.org/nschema#"
NPX = "http://purl.org/nanopub/x/"
AIDA = "http://purl.org/aida/"
RDF = "http://www.w3.org/1999/02/22-rdf-syntax-ns#"
XSD = "http://www.w3.org/2001/XMLSchema#"
PROV = "http://www.w3.org/ns/prov#"
RDFS = "http://www.w3.org/2000/01/rdf-schema#"

NP_HAS_ASSERTION = Iri(NP + "hasAssertion")
NP_HAS_PROVENANCE = Iri(NP + "hasProvenance")
NP_HAS_PUBINFO = Iri(NP + "hasPublicationInfo")
NP_CONTAINS_GRAPH = Iri(NP + "containsGraph")

NPX_AS_SENTENCE = Iri(NPX + "asSentence")
NPX_AS_FORMULA = Iri(NPX + "asFormula")
NPX_HAS_SAME_MEANING = Iri(NPX + "hasSameMeaning")
NPX_HAS_RELATED_MEANING = Iri(NPX + "hasRelatedMeaning")
NPX_AGREES_WITH = Iri(NPX + "agreesWith")
NPX_DISAGREES_WITH = Iri(NPX + "disagreesWith")
NPX_IS_CONVINCED_OF = Iri(NPX + "isConvincedOf")
NPX_IS_NOT_CONVINCED_OF = Iri(NPX + "isNotConvincedOf")
NPX_CREATED_BY_CHANNEL = Iri(NPX + "createdByChannel")
NPX_HAS_CERTAINTY_LEVEL = Iri(NPX + "hasCertaintyLevel")
NPX_HAS_MINTING_SALT = Iri(NPX + "hasMintingSalt")
NPX_HAS_PARAMETER_DIGEST = Iri(NPX + "hasParameterDigest")
NPX_PERSON = Iri(NPX + "Person")
NPX_BOT = Iri(NPX + "Bot")

# The literature notation uses rdf:about as a plain predicate to mark an
# entity as part of an underspecified formalization. That is nonstandard
# (rdf:about is an RDF/XML attribute, not a vocabulary term) but we keep it
# verbatim as an IRI predicate.
RDF_ABOUT = Iri(RDF + "about")
RDF_TYPE = Iri(RDF + "type")

RDFS_LABEL = Iri(RDFS + "label")

PROV_WAS_ATTRIBUTED_TO = Iri(PROV + "wasAttributedTo")
PROV_GENERATED_AT_TIME = Iri(PROV + "generatedAtTime")
PROV_WAS_DERIVED_FROM = Iri(PROV + "wasDerivedFrom")

XSD_DATETIME = XSD + "dateTime"
XSD_INTEGER = XSD + "integer"
XSD_DECIMAL = XSD + "decimal"
XSD_DOUBLE = XSD + "double"
XSD_BOOLEAN = XSD + "boolean"

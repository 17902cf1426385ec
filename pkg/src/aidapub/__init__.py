"""AIDA nanopublications: claim sentences with reversible URIs, an extended
nanopublication model with TriG I/O, corpus extraction, sentence clustering,
and a portal service."""

from .aida import (
    AIDA_PREFIX,
    AidaCodecError,
    AidaSentence,
    BadPrefix,
    DecodedTextNotAida,
    InvalidSentence,
    MalformedEscape,
    decode_uri,
    encode_uri,
    is_aida_uri,
)
from .clustering import (
    Cluster,
    ClusterParams,
    CorpusTooSmall,
    cluster_corpus,
    cluster_point,
    emit_relation_nanopubs,
    local_environment,
    orthogonal_corpus,
    synthetic_paraphrase_corpus,
    vectors_from_sentences,
)
from .extraction import (
    ExtractionReport,
    GeneRifRecord,
    ParseWarning,
    emit_quality_report,
    extract_corpus,
    parse_generif,
    strip_prefix,
)
from .nanopub import (
    AlreadyFormalized,
    Certainty,
    Channel,
    CycleIntroduced,
    DanglingGraphRef,
    Nanopublication,
    Provenance,
    StructureError,
    Violation,
    attach_formalization,
    build_aida_nanopub,
    build_meta_nanopub,
    collect_assertion_triples,
    parse_trig,
    parse_trig_document,
    provenance_of,
    serialize_trig,
    serialize_trig_many,
    validate_structure,
)
from .rdf import BlankNode, Iri, Literal, NamedGraph, Triple
from .store import (
    Agent,
    AgentKind,
    ConflictingContentForUri,
    MalformedUri,
    NanopubStore,
    Opinion,
    OpinionKind,
    Receipt,
    SelfLink,
    StatementView,
    UnknownAgent,
)
from .tfidf import EmptyCorpus, SentenceVector, TfidfModel, tfidf_fit, tfidf_transform, tokenize
from .trig import TrigSyntaxError, read_trig, write_document
from .validation import (
    Criterion,
    Rule,
    RuleSet,
    ValidationReport,
    Verdict,
    default_ruleset,
    dump_rules,
    load_rules,
    parse_rules,
    validate,
)

__version__ = "0.1.0"

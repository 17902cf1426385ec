"""Nanopublications as sets of named graphs.

A nanopublication bundles a head graph (linking the publication to its
assertion, provenance, and pubinfo graphs) with those graphs. Assertions can
be plain graphs of triples, or carry the head/body split where the assertion
head points at the sentence URI (asSentence) and optionally at a formal body
graph (asFormula). Graph containment (containsGraph) nests further subgraphs;
assertion retrieval takes its transitive closure.

Publication URIs are minted as urn:aidapub:<content digest> so identical
content (plus an explicit mint-time salt, recorded in pubinfo) yields
identical publications.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from datetime import datetime, timezone
from enum import Enum

from .aida import AIDA_PREFIX, AidaCodecError, AidaSentence, decode_uri, encode_uri
from .rdf import (
    NP_CONTAINS_GRAPH,
    NP_HAS_ASSERTION,
    NP_HAS_PROVENANCE,
    NP_HAS_PUBINFO,
    NPX,
    NPX_AS_FORMULA,
    NPX_AS_SENTENCE,
    NPX_CREATED_BY_CHANNEL,
    NPX_HAS_CERTAINTY_LEVEL,
    NPX_HAS_MINTING_SALT,
    PROV_GENERATED_AT_TIME,
    PROV_WAS_ATTRIBUTED_TO,
    PROV_WAS_DERIVED_FROM,
    RDF_ABOUT,
    XSD_DATETIME,
    Iri,
    Literal,
    NamedGraph,
    Triple,
    triple_sort_key,
)
from .trig import DEFAULT_BASE, read_trig, render_term, write_document

URN_PREFIX = "urn:aidapub:"

_BOOKKEEPING_PREDICATES = frozenset(
    {NP_CONTAINS_GRAPH.value, NPX_AS_SENTENCE.value, NPX_AS_FORMULA.value}
)


class StructureError(ValueError):
    """A nanopublication violates the structural invariants."""

    def __init__(self, message: str, violations: list["Violation"] | None = None) -> None:
        super().__init__(message)
        self.violations = violations or []


class DanglingGraphRef(StructureError):
    """A graph reference does not resolve inside the nanopublication."""


class AlreadyFormalized(ValueError):
    """The nanopublication already carries an asFormula body."""


class CycleIntroduced(ValueError):
    """The change would make the containsGraph relation cyclic."""


class Channel(Enum):
    AUTHOR = "Author"
    META_USER = "MetaUser"
    CURATOR = "Curator"
    TEXT_MINING = "TextMining"
    STRUCTURED_EXPORT = "StructuredExport"
    BOT = "Bot"

    @property
    def iri(self) -> Iri:
        return Iri(f"{NPX}{self.value}Channel")


class Certainty(Enum):
    HYPOTHESIZED = "Hypothesized"
    PROBABLE = "Probable"
    ESTABLISHED = "Established"
    UNSPECIFIED = "Unspecified"

    @property
    def iri(self) -> Iri:
        return Iri(f"{NPX}{self.value}")


def format_datetime(dt: datetime) -> str:
    dt = dt.astimezone(timezone.utc)
    if dt.microsecond:
        return dt.strftime("%Y-%m-%dT%H:%M:%S.%f") + "Z"
    return dt.strftime("%Y-%m-%dT%H:%M:%SZ")


def parse_datetime(lexical: str) -> datetime:
    return datetime.fromisoformat(lexical.replace("Z", "+00:00"))


@dataclass(frozen=True)
class Provenance:
    attributed_to: str
    generated_at: datetime
    derived_from: tuple[str, ...] = ()
    created_by_channel: Channel = Channel.AUTHOR
    certainty: Certainty = Certainty.UNSPECIFIED

    def __post_init__(self) -> None:
        if not self.attributed_to:
            raise ValueError("provenance needs an attributed agent")
        Iri(self.attributed_to)
        object.__setattr__(self, "derived_from", tuple(self.derived_from))

    def canonical(self) -> str:
        return "|".join(
            [
                self.attributed_to,
                format_datetime(self.generated_at),
                self.created_by_channel.value,
                self.certainty.value,
            ]
            + sorted(self.derived_from)
        )

    def summary(self) -> dict:
        return {
            "attributed_to": self.attributed_to,
            "generated_at": format_datetime(self.generated_at),
            "derived_from": list(self.derived_from),
            "channel": self.created_by_channel.value,
            "certainty": self.certainty.value,
        }


@dataclass(frozen=True, eq=True)
class Nanopublication:
    uri: str
    head: NamedGraph
    graphs: dict[str, NamedGraph] = field(default_factory=dict)

    def assertion_iri(self) -> str:
        triples = [t for t in self.head.triples if t.predicate == NP_HAS_ASSERTION]
        if len(triples) != 1 or not isinstance(triples[0].object, Iri):
            raise StructureError(f"nanopub {self.uri} has no unique assertion graph")
        return triples[0].object.value

    def all_graphs(self) -> list[NamedGraph]:
        return [self.head, *self.graphs.values()]

    def sentence_uri(self) -> str | None:
        """The asSentence target of the assertion head, when this is a
        sentence-backed nanopublication."""
        try:
            assertion = self.assertion_iri()
        except StructureError:
            return None
        for graph in self.graphs.values():
            for t in graph.triples:
                if (
                    t.predicate == NPX_AS_SENTENCE
                    and isinstance(t.subject, Iri)
                    and t.subject.value == assertion
                    and isinstance(t.object, Iri)
                ):
                    return t.object.value
        return None

    def formula_iri(self) -> str | None:
        for graph in self.graphs.values():
            for t in graph.triples:
                if t.predicate == NPX_AS_FORMULA and isinstance(t.object, Iri):
                    return t.object.value
        return None


@dataclass(frozen=True)
class Violation:
    code: str
    detail: str

    def __str__(self) -> str:
        return f"{self.code}: {self.detail}"


def _containment_edges(np: Nanopublication) -> list[tuple[str, str]]:
    edges = []
    for graph in np.all_graphs():
        for t in graph.triples:
            if t.predicate == NP_CONTAINS_GRAPH and isinstance(t.object, Iri):
                subject = t.subject.value if isinstance(t.subject, Iri) else None
                if subject is not None:
                    edges.append((subject, t.object.value))
    return edges


def validate_structure(np: Nanopublication) -> list[Violation]:
    """Check every structural invariant; an empty list means valid."""
    violations: list[Violation] = []

    assertion_triples = [t for t in np.head.triples if t.predicate == NP_HAS_ASSERTION]
    assertion: str | None = None
    if not assertion_triples:
        violations.append(Violation("NoAssertion", f"head {np.head.name} lacks hasAssertion"))
    elif len(assertion_triples) > 1:
        violations.append(Violation("MultipleAssertions", f"head {np.head.name}"))
    else:
        t = assertion_triples[0]
        if not isinstance(t.subject, Iri) or t.subject.value != np.uri:
            violations.append(
                Violation("AssertionSubjectMismatch", f"{t.subject} is not {np.uri}")
            )
        if not isinstance(t.object, Iri):
            violations.append(Violation("BadAssertion", "hasAssertion object is not an IRI"))
        else:
            assertion = t.object.value
            if assertion not in np.graphs:
                violations.append(Violation("MissingAssertionGraph", assertion))

    for key, graph in np.graphs.items():
        if key != graph.name:
            violations.append(Violation("GraphNameMismatch", f"{key} vs {graph.name}"))

    for pred in (NP_HAS_PROVENANCE, NP_HAS_PUBINFO):
        for t in np.head.triples:
            if t.predicate == pred:
                if not isinstance(t.object, Iri) or t.object.value not in np.graphs:
                    violations.append(Violation("DanglingGraphRef", f"{pred.value} target"))

    edges = _containment_edges(np)
    for src, dst in edges:
        if dst not in np.graphs:
            violations.append(Violation("DanglingGraphRef", f"containsGraph {src} -> {dst}"))

    adjacency: dict[str, list[str]] = {}
    for src, dst in edges:
        adjacency.setdefault(src, []).append(dst)
    state: dict[str, int] = {}

    def cyclic(node: str) -> bool:
        state[node] = 1
        for nxt in adjacency.get(node, ()):
            mark = state.get(nxt)
            if mark == 1 or (mark is None and cyclic(nxt)):
                return True
        state[node] = 2
        return False

    if any(state.get(n) is None and cyclic(n) for n in list(adjacency)):
        violations.append(Violation("CycleDetected", "containsGraph relation is cyclic"))

    for graph in np.graphs.values():
        for t in graph.triples:
            if t.predicate == NPX_AS_SENTENCE:
                if not isinstance(t.object, Iri) or not t.object.value.startswith(AIDA_PREFIX):
                    violations.append(Violation("BadAidaUri", f"asSentence in {graph.name}"))
                else:
                    try:
                        decode_uri(t.object.value)
                    except AidaCodecError as exc:
                        violations.append(Violation("BadAidaUri", str(exc)))
            if t.predicate == NPX_AS_FORMULA:
                if not isinstance(t.object, Iri) or t.object.value not in np.graphs:
                    violations.append(Violation("DanglingGraphRef", f"asFormula in {graph.name}"))

    return violations


def collect_assertion_triples(np: Nanopublication) -> frozenset[Triple]:
    """All triples of the assertion graph and every graph reachable through
    containsGraph, without the containsGraph/asSentence/asFormula bookkeeping
    triples themselves."""
    assertion = np.assertion_iri()
    if assertion not in np.graphs:
        raise DanglingGraphRef(f"assertion graph {assertion} is not part of the nanopub")

    adjacency: dict[str, list[str]] = {}
    for src, dst in _containment_edges(np):
        adjacency.setdefault(src, []).append(dst)

    seen = {assertion}
    queue = [assertion]
    collected: set[Triple] = set()
    while queue:
        name = queue.pop()
        graph = np.graphs.get(name)
        if graph is None:
            raise DanglingGraphRef(f"containsGraph target {name} is missing")
        for t in graph.triples:
            if t.predicate.value not in _BOOKKEEPING_PREDICATES:
                collected.add(t)
        for nxt in adjacency.get(name, ()):
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    return frozenset(collected)


# ---------------------------------------------------------------------------
# Minting
# ---------------------------------------------------------------------------

def _digest(parts: list[str]) -> str:
    return hashlib.sha256("\x1f".join(parts).encode("utf-8")).hexdigest()[:32]


def _render_graph_canonical(graph: NamedGraph) -> str:
    triples = ";".join(
        f"{render_term(t.subject)} {render_term(t.predicate)} {render_term(t.object)}"
        for t in graph.sorted_triples()
    )
    return f"{graph.name}={triples}"


def _provenance_graph(
    name: str, about: str, prov: Provenance, annotations: tuple = ()
) -> NamedGraph:
    subject = Iri(about)
    triples = [
        Triple(subject, PROV_WAS_ATTRIBUTED_TO, Iri(prov.attributed_to)),
        Triple(
            subject,
            PROV_GENERATED_AT_TIME,
            Literal(format_datetime(prov.generated_at), datatype=XSD_DATETIME),
        ),
        Triple(subject, NPX_CREATED_BY_CHANNEL, prov.created_by_channel.iri),
    ]
    for source in prov.derived_from:
        triples.append(Triple(subject, PROV_WAS_DERIVED_FROM, Iri(source)))
    if prov.certainty is not Certainty.UNSPECIFIED:
        triples.append(Triple(subject, NPX_HAS_CERTAINTY_LEVEL, prov.certainty.iri))
    for predicate, obj in annotations:
        triples.append(Triple(subject, predicate, obj))
    return NamedGraph(name, triples)


def _pubinfo_graph(name: str, pub_uri: str, prov: Provenance, salt: str) -> NamedGraph:
    subject = Iri(pub_uri)
    return NamedGraph(
        name,
        [
            Triple(
                subject,
                PROV_GENERATED_AT_TIME,
                Literal(format_datetime(prov.generated_at), datatype=XSD_DATETIME),
            ),
            Triple(subject, NPX_HAS_MINTING_SALT, Literal(salt)),
        ],
    )


def _assemble(
    stem: str,
    prov: Provenance,
    salt: str,
    assertion_triples: frozenset[Triple],
    sentence_uri: str | None,
    body: NamedGraph | None,
    subgraphs: tuple[NamedGraph, ...],
    prov_annotations: tuple = (),
) -> Nanopublication:
    assertion_name = stem + ".Assertion"
    head_name = stem + ".Head"
    prov_name = stem + ".Provenance"
    info_name = stem + ".Pubinfo"

    pub = Iri(stem)
    assertion = Iri(assertion_name)
    head_triples = [
        Triple(pub, NP_HAS_ASSERTION, assertion),
        Triple(pub, NP_HAS_PROVENANCE, Iri(prov_name)),
        Triple(pub, NP_HAS_PUBINFO, Iri(info_name)),
    ]
    graphs: dict[str, NamedGraph] = {}

    if sentence_uri is None:
        graphs[assertion_name] = NamedGraph(assertion_name, assertion_triples)
    else:
        ahead_name = stem + ".Assertion.Head"
        ahead_triples = [Triple(assertion, NPX_AS_SENTENCE, Iri(sentence_uri))]
        head_triples.append(Triple(assertion, NP_CONTAINS_GRAPH, Iri(ahead_name)))
        if body is not None:
            ahead_triples.append(Triple(assertion, NPX_AS_FORMULA, Iri(body.name)))
            head_triples.append(Triple(assertion, NP_CONTAINS_GRAPH, Iri(body.name)))
            for sub in subgraphs:
                head_triples.append(Triple(Iri(body.name), NP_CONTAINS_GRAPH, Iri(sub.name)))
                graphs[sub.name] = sub
            graphs[body.name] = body
        graphs[assertion_name] = NamedGraph(assertion_name, ())
        graphs[ahead_name] = NamedGraph(ahead_name, ahead_triples)

    graphs[prov_name] = _provenance_graph(prov_name, assertion_name, prov, prov_annotations)
    graphs[info_name] = _pubinfo_graph(info_name, stem, prov, salt)
    return Nanopublication(stem, NamedGraph(head_name, head_triples), graphs)


def build_aida_nanopub(
    sentence: AidaSentence, prov: Provenance, salt: str = ""
) -> Nanopublication:
    """A nanopublication asserting the sentence, with no formal body yet."""
    sentence_uri = encode_uri(sentence)
    stem = URN_PREFIX + _digest(["aida", sentence_uri, prov.canonical(), salt])
    return _assemble(stem, prov, salt, frozenset(), sentence_uri, None, ())


def attach_formalization(
    np: Nanopublication,
    body: NamedGraph,
    partial_about: tuple[str, ...] | list[str] = (),
    subgraphs: tuple[NamedGraph, ...] | list[NamedGraph] = (),
) -> Nanopublication:
    """A new nanopublication equal to np plus a formal body graph. The body
    keeps its own graph name; entities that must appear in an eventual full
    formalization are marked with one rdf:about triple each. The publication
    URI is re-minted since the content changed (the mint salt is reused)."""
    sentence_uri = np.sentence_uri()
    if sentence_uri is None:
        raise StructureError(f"nanopub {np.uri} has no sentence assertion to formalize")
    if np.formula_iri() is not None:
        raise AlreadyFormalized(f"nanopub {np.uri} already has a formula body")
    prov = provenance_of(np)
    if prov is None:
        raise StructureError(f"nanopub {np.uri} has no readable provenance")
    salt = minting_salt_of(np)

    body_subject = Iri(body.name)
    body_triples = set(body.triples)
    for entity in partial_about:
        body_triples.add(Triple(body_subject, RDF_ABOUT, Iri(entity)))
    full_body = NamedGraph(body.name, body_triples)
    subs = tuple(subgraphs)

    parts = ["aida", sentence_uri, prov.canonical(), salt, _render_graph_canonical(full_body)]
    parts += [_render_graph_canonical(g) for g in subs]
    stem = URN_PREFIX + _digest(parts)
    result = _assemble(stem, prov, salt, frozenset(), sentence_uri, full_body, subs)

    problems = validate_structure(result)
    if any(v.code == "CycleDetected" for v in problems):
        raise CycleIntroduced("body/subgraphs close a containsGraph cycle")
    if any(v.code == "DanglingGraphRef" for v in problems):
        raise DanglingGraphRef("body/subgraphs reference graphs that are not attached")
    if problems:
        raise StructureError("formalization produced an invalid nanopub", problems)
    return result


def build_meta_nanopub(
    assertion_triples, prov: Provenance, salt: str = "", prov_annotations: tuple = ()
) -> Nanopublication:
    """A plain nanopublication whose assertion graph holds the given triples
    directly (opinions, sentence links, agent records, ...). Extra
    (predicate, object) annotations land in the provenance graph."""
    triples = frozenset(assertion_triples)
    rendered = ";".join(
        f"{render_term(t.subject)} {render_term(t.predicate)} {render_term(t.object)}"
        for t in sorted(triples, key=triple_sort_key)
    )
    annotated = ";".join(
        f"{render_term(p)} {render_term(o)}" for p, o in prov_annotations
    )
    stem = URN_PREFIX + _digest(["meta", rendered, prov.canonical(), salt, annotated])
    return _assemble(stem, prov, salt, triples, None, None, (), prov_annotations)


def provenance_of(np: Nanopublication) -> Provenance | None:
    """Reconstruct the Provenance record from the provenance graph, if readable."""
    prov_names = [
        t.object.value
        for t in np.head.triples
        if t.predicate == NP_HAS_PROVENANCE and isinstance(t.object, Iri)
    ]
    if not prov_names or prov_names[0] not in np.graphs:
        return None
    graph = np.graphs[prov_names[0]]
    attributed = None
    generated = None
    derived: list[str] = []
    channel = Channel.AUTHOR
    certainty = Certainty.UNSPECIFIED
    for t in graph.triples:
        if t.predicate == PROV_WAS_ATTRIBUTED_TO and isinstance(t.object, Iri):
            attributed = t.object.value
        elif t.predicate == PROV_GENERATED_AT_TIME and isinstance(t.object, Literal):
            try:
                generated = parse_datetime(t.object.lexical)
            except ValueError:
                return None
        elif t.predicate == PROV_WAS_DERIVED_FROM and isinstance(t.object, Iri):
            derived.append(t.object.value)
        elif t.predicate == NPX_CREATED_BY_CHANNEL and isinstance(t.object, Iri):
            name = t.object.value.removeprefix(NPX).removesuffix("Channel")
            try:
                channel = Channel(name)
            except ValueError:
                pass
        elif t.predicate == NPX_HAS_CERTAINTY_LEVEL and isinstance(t.object, Iri):
            try:
                certainty = Certainty(t.object.value.removeprefix(NPX))
            except ValueError:
                pass
    if attributed is None or generated is None:
        return None
    return Provenance(attributed, generated, tuple(sorted(derived)), channel, certainty)


def minting_salt_of(np: Nanopublication) -> str:
    info_names = [
        t.object.value
        for t in np.head.triples
        if t.predicate == NP_HAS_PUBINFO and isinstance(t.object, Iri)
    ]
    if info_names and info_names[0] in np.graphs:
        for t in np.graphs[info_names[0]].triples:
            if t.predicate == NPX_HAS_MINTING_SALT and isinstance(t.object, Literal):
                return t.object.lexical
    return ""


# ---------------------------------------------------------------------------
# TriG I/O
# ---------------------------------------------------------------------------

def _ordered_blocks(np: Nanopublication) -> list[NamedGraph]:
    return sorted(np.all_graphs(), key=lambda g: g.name)


def serialize_trig(np: Nanopublication, base: str = DEFAULT_BASE) -> bytes:
    """Canonical TriG bytes for one nanopublication (graphs sorted by IRI,
    triples sorted; byte-stable)."""
    return write_document(_ordered_blocks(np), base=base)


def serialize_trig_many(nps, base: str = DEFAULT_BASE) -> bytes:
    blocks: list[NamedGraph] = []
    for np in nps:
        blocks.extend(_ordered_blocks(np))
    return write_document(blocks, base=base)


@dataclass
class ParsedDocument:
    nanopubs: list[Nanopublication]
    unattached: list[NamedGraph]
    default_triples: list[Triple]


def parse_trig_document(data: bytes | str, base: str = DEFAULT_BASE) -> ParsedDocument:
    """Parse TriG and group graphs into nanopublications by their hasAssertion
    heads (order of appearance). Graphs no nanopub claims are reported in
    `unattached` rather than treated as fatal."""
    doc = read_trig(data, base=base)
    graphs, default_triples = doc.merged_graphs()

    heads = [
        g
        for g in graphs.values()
        if any(t.predicate == NP_HAS_ASSERTION for t in g.triples)
    ]
    nanopubs: list[Nanopublication] = []
    claimed: set[str] = set()
    for head in heads:
        assertion_triples = [t for t in head.triples if t.predicate == NP_HAS_ASSERTION]
        if len(assertion_triples) > 1:
            raise StructureError(f"graph {head.name} holds more than one hasAssertion")
        t = assertion_triples[0]
        if not isinstance(t.subject, Iri) or not isinstance(t.object, Iri):
            raise StructureError(f"bad hasAssertion triple in {head.name}")
        uri = t.subject.value

        referenced = [t.object.value]
        for other in head.triples:
            if other.predicate in (NP_HAS_PROVENANCE, NP_HAS_PUBINFO):
                if not isinstance(other.object, Iri):
                    raise StructureError(f"bad graph reference in {head.name}")
                referenced.append(other.object.value)

        # Containment edges may sit in the head or inside any already-claimed
        # graph, so grow the member set to a fixpoint.
        member: dict[str, NamedGraph] = {}
        frontier = list(dict.fromkeys(referenced))
        while frontier:
            for name in frontier:
                if name in member:
                    continue
                if name not in graphs:
                    raise StructureError(
                        f"nanopub {uri} references missing graph {name}",
                        [Violation("DanglingGraphRef", name)],
                    )
                member[name] = graphs[name]
            found: set[str] = set()
            for source in (head, *member.values()):
                for edge in source.triples:
                    if (
                        edge.predicate == NP_CONTAINS_GRAPH
                        and isinstance(edge.subject, Iri)
                        and edge.subject.value in member
                        and isinstance(edge.object, Iri)
                        and edge.object.value not in member
                    ):
                        found.add(edge.object.value)
            frontier = sorted(found)

        np = Nanopublication(uri, head, member)
        problems = validate_structure(np)
        if problems:
            raise StructureError(
                f"nanopub {uri} is structurally invalid: "
                + "; ".join(str(v) for v in problems),
                problems,
            )
        nanopubs.append(np)
        claimed.add(head.name)
        claimed.update(member)

    unattached = [g for name, g in graphs.items() if name not in claimed]
    return ParsedDocument(nanopubs, unattached, default_triples)


def parse_trig(data: bytes | str, base: str = DEFAULT_BASE) -> list[Nanopublication]:
    return parse_trig_document(data, base=base).nanopubs

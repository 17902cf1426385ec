"""Persistent nanopublication store with statement-page aggregation.

Publications are immutable: the store only ever appends, both in memory and
in its TriG journal file (replayed at startup). Statement views aggregate
everything known about one sentence URI: asserting publications, relation
links touching it (human-asserted links ranked before bot proposals), and
the latest opinion per agent. A single lock serializes access; every read
sees a consistent snapshot.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from datetime import datetime, timezone
from enum import Enum
from pathlib import Path

from .aida import AidaCodecError, decode_uri
from .nanopub import (
    Channel,
    Nanopublication,
    Provenance,
    StructureError,
    build_meta_nanopub,
    collect_assertion_triples,
    parse_trig_document,
    provenance_of,
    serialize_trig,
    validate_structure,
)
from .rdf import (
    NPX_AGREES_WITH,
    NPX_BOT,
    NPX_DISAGREES_WITH,
    NPX_HAS_RELATED_MEANING,
    NPX_HAS_SAME_MEANING,
    NPX_IS_CONVINCED_OF,
    NPX_IS_NOT_CONVINCED_OF,
    NPX_PERSON,
    RDF_TYPE,
    RDFS_LABEL,
    Iri,
    Literal,
    Triple,
)
from .tfidf import TfidfModel, tfidf_fit


class UnknownAgent(KeyError):
    pass


class MalformedUri(ValueError):
    pass


class SelfLink(ValueError):
    pass


class ConflictingContentForUri(ValueError):
    pass


class AgentKind(Enum):
    PERSON = "Person"
    BOT = "Bot"


@dataclass(frozen=True)
class Agent:
    iri: str
    display_name: str
    kind: AgentKind = AgentKind.PERSON

    def to_dict(self) -> dict:
        return {"iri": self.iri, "display_name": self.display_name, "kind": self.kind.value}


class OpinionKind(Enum):
    AGREES = "Agrees"
    DISAGREES = "Disagrees"
    IS_CONVINCED = "IsConvinced"
    IS_NOT_CONVINCED = "IsNotConvinced"


_OPINION_PREDICATES = {
    OpinionKind.AGREES: NPX_AGREES_WITH,
    OpinionKind.DISAGREES: NPX_DISAGREES_WITH,
    OpinionKind.IS_CONVINCED: NPX_IS_CONVINCED_OF,
    OpinionKind.IS_NOT_CONVINCED: NPX_IS_NOT_CONVINCED_OF,
}
_PREDICATE_OPINIONS = {iri.value: kind for kind, iri in _OPINION_PREDICATES.items()}

_RELATION_PREDICATES = {
    "hasSameMeaning": NPX_HAS_SAME_MEANING,
    "hasRelatedMeaning": NPX_HAS_RELATED_MEANING,
}
_PREDICATE_RELATIONS = {iri.value: name for name, iri in _RELATION_PREDICATES.items()}


@dataclass(frozen=True)
class Opinion:
    agent: str
    statement: str
    kind: OpinionKind
    nanopub_uri: str
    at: datetime

    def to_dict(self) -> dict:
        return {
            "agent": self.agent,
            "statement": self.statement,
            "kind": self.kind.value,
            "nanopub_uri": self.nanopub_uri,
            "at": self.at.isoformat(),
        }


@dataclass(frozen=True)
class RelatedLink:
    other: str
    relation: str
    nanopub_uri: str
    human_asserted: bool

    def to_dict(self) -> dict:
        return {
            "other": self.other,
            "relation": self.relation,
            "nanopub_uri": self.nanopub_uri,
            "human_asserted": self.human_asserted,
        }


@dataclass(frozen=True)
class Receipt:
    uri: str
    stored_at: datetime

    def to_dict(self) -> dict:
        return {"uri": self.uri, "stored_at": self.stored_at.isoformat()}


@dataclass
class StatementView:
    sentence: str
    uri: str
    asserting_nanopubs: list[tuple[str, dict]] = field(default_factory=list)
    related: list[RelatedLink] = field(default_factory=list)
    opinions: list[Opinion] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "sentence": self.sentence,
            "uri": self.uri,
            "asserting_nanopubs": [
                {"nanopub_uri": uri, "provenance": prov}
                for uri, prov in self.asserting_nanopubs
            ],
            "related": [link.to_dict() for link in self.related],
            "opinions": [op.to_dict() for op in self.opinions],
        }


class NanopubStore:
    """Append-only store; pass a journal path for durability."""

    def __init__(self, journal: str | Path | None = None) -> None:
        self._lock = threading.RLock()
        self._journal = Path(journal) if journal else None
        self._pubs: dict[str, Nanopublication] = {}
        self._receipts: dict[str, Receipt] = {}
        self._order: list[str] = []
        self._by_sentence: dict[str, list[str]] = {}
        self._relations: dict[str, list[RelatedLink]] = {}
        self._opinions: dict[str, list[tuple[int, Opinion]]] = {}
        self._agents: dict[str, Agent] = {}
        self._search_model: TfidfModel | None = None
        if self._journal and self._journal.exists():
            self._replay()

    def _replay(self) -> None:
        data = self._journal.read_bytes()
        if not data.strip():
            return
        for np in parse_trig_document(data).nanopubs:
            prov = provenance_of(np)
            stored_at = prov.generated_at if prov else datetime.now(timezone.utc)
            self._ingest(np, stored_at)

    # -- writes --------------------------------------------------------------

    def publish(self, np: Nanopublication) -> Receipt:
        """Durably store a structurally valid nanopublication. Idempotent for
        identical URI + content; conflicting content for a known URI is an
        error (publications are immutable)."""
        problems = validate_structure(np)
        if problems:
            raise StructureError(
                "cannot publish invalid nanopub: " + "; ".join(str(v) for v in problems),
                problems,
            )
        with self._lock:
            existing = self._pubs.get(np.uri)
            if existing is not None:
                if existing == np:
                    return self._receipts[np.uri]
                raise ConflictingContentForUri(np.uri)
            if self._journal:
                with open(self._journal, "ab") as fh:
                    fh.write(serialize_trig(np))
                    fh.flush()
            return self._ingest(np, datetime.now(timezone.utc))

    def _ingest(self, np: Nanopublication, stored_at: datetime) -> Receipt:
        with self._lock:
            if np.uri in self._pubs:
                return self._receipts[np.uri]
            receipt = Receipt(np.uri, stored_at)
            self._pubs[np.uri] = np
            self._receipts[np.uri] = receipt
            seq = len(self._order)
            self._order.append(np.uri)

            sentence_uri = np.sentence_uri()
            if sentence_uri is not None:
                self._by_sentence.setdefault(sentence_uri, []).append(np.uri)

            prov = provenance_of(np)
            human = prov is None or prov.created_by_channel is not Channel.BOT
            at = prov.generated_at if prov else stored_at
            try:
                assertion = collect_assertion_triples(np)
            except StructureError:
                assertion = frozenset()

            for t in assertion:
                if not isinstance(t.subject, Iri) or not isinstance(t.object, Iri):
                    continue
                relation = _PREDICATE_RELATIONS.get(t.predicate.value)
                if relation:
                    link_a = RelatedLink(t.object.value, relation, np.uri, human)
                    link_b = RelatedLink(t.subject.value, relation, np.uri, human)
                    self._relations.setdefault(t.subject.value, []).append(link_a)
                    self._relations.setdefault(t.object.value, []).append(link_b)
                if t.predicate == RDF_TYPE and t.object in (NPX_PERSON, NPX_BOT):
                    kind = AgentKind.PERSON if t.object == NPX_PERSON else AgentKind.BOT
                    label = next(
                        (
                            o.object.lexical
                            for o in assertion
                            if o.subject == t.subject
                            and o.predicate == RDFS_LABEL
                            and isinstance(o.object, Literal)
                        ),
                        t.subject.value,
                    )
                    self._agents[t.subject.value] = Agent(t.subject.value, label, kind)

            opinion_kind = None
            if len(assertion) == 1:
                (t,) = assertion
                if isinstance(t.subject, Iri) and isinstance(t.object, Iri):
                    opinion_kind = _PREDICATE_OPINIONS.get(t.predicate.value)
                    if opinion_kind:
                        opinion = Opinion(
                            t.subject.value, t.object.value, opinion_kind, np.uri, at
                        )
                        self._opinions.setdefault(t.object.value, []).append((seq, opinion))

            self._search_model = None
            return receipt

    def register_agent(self, agent: Agent, at: datetime | None = None) -> Agent:
        with self._lock:
            existing = self._agents.get(agent.iri)
            if existing == agent:
                return existing
            kind_iri = NPX_PERSON if agent.kind is AgentKind.PERSON else NPX_BOT
            subject = Iri(agent.iri)
            prov = Provenance(
                attributed_to=agent.iri,
                generated_at=at or datetime.now(timezone.utc),
                created_by_channel=Channel.META_USER,
            )
            np = build_meta_nanopub(
                [
                    Triple(subject, RDF_TYPE, kind_iri),
                    Triple(subject, RDFS_LABEL, Literal(agent.display_name)),
                ],
                prov,
            )
            self.publish(np)
            self._agents[agent.iri] = agent
            return agent

    def post_opinion(self, agent: str, statement: str, kind: OpinionKind) -> Opinion:
        """Publish a one-click opinion as a meta-nanopublication. A newer
        opinion by the same agent wins in views; all remain stored."""
        self._decode_or_raise(statement)
        with self._lock:
            if agent not in self._agents:
                raise UnknownAgent(agent)
            prov = Provenance(
                attributed_to=agent,
                generated_at=datetime.now(timezone.utc),
                created_by_channel=Channel.META_USER,
            )
            np = build_meta_nanopub(
                [Triple(Iri(agent), _OPINION_PREDICATES[kind], Iri(statement))], prov
            )
            self.publish(np)
            for seq, opinion in self._opinions.get(statement, []):
                if opinion.nanopub_uri == np.uri:
                    return opinion
            raise AssertionError("opinion nanopub was not indexed")

    def link_statements(self, agent: str, a: str, b: str, relation: str) -> Receipt:
        if relation not in _RELATION_PREDICATES:
            raise ValueError(f"unknown relation {relation!r}")
        self._decode_or_raise(a)
        self._decode_or_raise(b)
        if a == b:
            raise SelfLink(a)
        with self._lock:
            if agent not in self._agents:
                raise UnknownAgent(agent)
            prov = Provenance(
                attributed_to=agent,
                generated_at=datetime.now(timezone.utc),
                created_by_channel=Channel.META_USER,
            )
            np = build_meta_nanopub(
                [Triple(Iri(a), _RELATION_PREDICATES[relation], Iri(b))], prov
            )
            return self.publish(np)

    # -- reads ---------------------------------------------------------------

    @staticmethod
    def _decode_or_raise(uri: str):
        try:
            return decode_uri(uri)
        except AidaCodecError as exc:
            raise MalformedUri(str(exc)) from exc

    def get_statement(self, uri: str) -> StatementView:
        """Everything stored about one sentence. Unknown sentences yield an
        empty view (the sentence exists whether or not anybody asserted it)."""
        sentence = self._decode_or_raise(uri)
        canonical = sentence.uri
        with self._lock:
            asserting = [
                (pub_uri, self._prov_summary(pub_uri))
                for pub_uri in sorted(self._by_sentence.get(canonical, []))
            ]
            related = sorted(
                self._relations.get(canonical, []),
                key=lambda link: (not link.human_asserted, link.relation, link.other, link.nanopub_uri),
            )
            latest: dict[str, tuple[int, Opinion]] = {}
            for seq, opinion in self._opinions.get(canonical, []):
                prev = latest.get(opinion.agent)
                if prev is None or (opinion.at, seq) >= (prev[1].at, prev[0]):
                    latest[opinion.agent] = (seq, opinion)
            opinions = [latest[a][1] for a in sorted(latest)]
            return StatementView(sentence.text, canonical, asserting, related, opinions)

    def _prov_summary(self, pub_uri: str) -> dict:
        prov = provenance_of(self._pubs[pub_uri])
        return prov.summary() if prov else {}

    def get_nanopub(self, uri: str) -> Nanopublication | None:
        with self._lock:
            return self._pubs.get(uri)

    def get_agent(self, iri: str) -> Agent | None:
        with self._lock:
            return self._agents.get(iri)

    def list_agents(self) -> list[Agent]:
        with self._lock:
            return [self._agents[i] for i in sorted(self._agents)]

    def __len__(self) -> int:
        with self._lock:
            return len(self._pubs)

    def known_sentences(self) -> list[str]:
        with self._lock:
            uris = set(self._by_sentence) | set(self._relations) | set(self._opinions)
            return sorted(uris)

    def search(self, query: str, limit: int = 10) -> list[tuple[str, float]]:
        """Rank stored sentences by tf-idf cosine against the query."""
        if not query.strip():
            return []
        with self._lock:
            sentences = []
            for uri in self.known_sentences():
                try:
                    sentences.append(decode_uri(uri))
                except AidaCodecError:
                    continue
            if not sentences:
                return []
            if self._search_model is None or self._search_model.document_count != len(sentences):
                self._search_model = tfidf_fit(sentences)
            model = self._search_model
            query_vec = model.transform_text("urn:aidapub:query", query)
            scored = []
            for sentence in sentences:
                vec = model.transform(sentence)
                score = query_vec.cosine_similarity(vec)
                if score > 0.0:
                    scored.append((sentence.uri, score))
            scored.sort(key=lambda item: (-item[1], item[0]))
            return scored[:limit]

"""TriG reader and writer for named-graph datasets.

The writer is deliberately canonical: fixed prefix block, one graph block per
named graph, triples sorted, no abbreviations beyond safe prefixed names.
Serializing the same dataset twice yields identical bytes, so outputs can be
golden-file tested.

The reader accepts a practical TriG subset: @prefix/@base and SPARQL-style
PREFIX/BASE, optional GRAPH keyword, default-graph triples, predicate/object
lists, 'a', numeric/boolean literal abbreviations, all four string quoting
forms, blank node labels, [] and bnode property lists. RDF collections are
not supported. Errors carry line and column.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from urllib.parse import urljoin

from .rdf import (
    AIDA,
    NP,
    NPX,
    RDF,
    RDF_TYPE,
    XSD,
    XSD_BOOLEAN,
    XSD_DECIMAL,
    XSD_DOUBLE,
    XSD_INTEGER,
    BlankNode,
    Iri,
    Literal,
    NamedGraph,
    Term,
    Triple,
)

DEFAULT_BASE = "http://purl.org/aidapub/"

#: Prefix table used by every emitted file, in emission order.
PREFIXES: tuple[tuple[str, str], ...] = (
    ("np", NP),
    ("npx", NPX),
    ("aida", AIDA),
    ("rdf", RDF),
    ("xsd", XSD),
)


class TrigSyntaxError(ValueError):
    def __init__(self, message: str, line: int, col: int) -> None:
        super().__init__(f"line {line}, col {col}: {message}")
        self.line = line
        self.col = col


# ---------------------------------------------------------------------------
# Writing
# ---------------------------------------------------------------------------

_SAFE_LOCAL = re.compile(r"[A-Za-z][A-Za-z0-9_-]*")

_ESCAPES = {
    "\\": "\\\\",
    '"': '\\"',
    "\n": "\\n",
    "\r": "\\r",
    "\t": "\\t",
    "\b": "\\b",
    "\f": "\\f",
}


def _quote(lexical: str) -> str:
    out = ['"']
    for ch in lexical:
        if ch in _ESCAPES:
            out.append(_ESCAPES[ch])
        elif ord(ch) < 0x20:
            out.append(f"\\u{ord(ch):04X}")
        else:
            out.append(ch)
    out.append('"')
    return "".join(out)


def render_term(term: Term) -> str:
    if isinstance(term, Iri):
        for prefix, ns in PREFIXES:
            if term.value.startswith(ns):
                local = term.value[len(ns):]
                if _SAFE_LOCAL.fullmatch(local):
                    return f"{prefix}:{local}"
        return f"<{term.value}>"
    if isinstance(term, BlankNode):
        return f"_:{term.label}"
    lit = _quote(term.lexical)
    if term.language:
        return f"{lit}@{term.language}"
    if term.datatype:
        return f"{lit}^^{render_term(Iri(term.datatype))}"
    return lit


def write_document(graphs: list[NamedGraph], base: str = DEFAULT_BASE) -> bytes:
    """Write graph blocks in the given order; within a block triples are
    sorted so output is byte-stable."""
    lines = [f"@base <{base}> ."]
    for prefix, ns in PREFIXES:
        lines.append(f"@prefix {prefix}: <{ns}> .")
    for graph in graphs:
        lines.append("")
        lines.append(f"<{graph.name}> {{")
        for t in graph.sorted_triples():
            lines.append(
                f"    {render_term(t.subject)} {render_term(t.predicate)} {render_term(t.object)} ."
            )
        lines.append("}")
    return ("\n".join(lines) + "\n").encode("utf-8")


# ---------------------------------------------------------------------------
# Reading
# ---------------------------------------------------------------------------

@dataclass
class TrigDocument:
    base: str
    prefixes: dict[str, str]
    #: (graph name or None for the default graph, triples) in document order.
    blocks: list[tuple[str | None, list[Triple]]] = field(default_factory=list)

    def merged_graphs(self) -> tuple[dict[str, NamedGraph], list[Triple]]:
        """Graphs merged by name in first-appearance order, plus default-graph
        triples."""
        order: dict[str, list[Triple]] = {}
        default: list[Triple] = []
        for name, triples in self.blocks:
            if name is None:
                default.extend(triples)
            else:
                order.setdefault(name, []).extend(triples)
        return {name: NamedGraph(name, ts) for name, ts in order.items()}, default


_WS = " \t\r\n"
_HEX = "0123456789abcdefABCDEF"
_LOCAL_PLAIN = re.compile(r"[A-Za-z0-9_:+-]")
_LANGTAG = re.compile(r"[a-zA-Z]+(?:-[a-zA-Z0-9]+)*")
_NUMBER = re.compile(r"[+-]?(?:\d+\.\d+(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?|\d+(?:[eE][+-]?\d+)?)")
_PN_PREFIX = re.compile(r"[A-Za-z][A-Za-z0-9_.-]*")
_STRING_ESCAPES = {
    "t": "\t",
    "b": "\b",
    "n": "\n",
    "r": "\r",
    "f": "\f",
    '"': '"',
    "'": "'",
    "\\": "\\",
}


class _Scanner:
    """Single-pass reader over the document text with line/col tracking."""

    def __init__(self, text: str) -> None:
        self.text = text
        self.pos = 0
        self.line = 1
        self.col = 1

    def error(self, message: str) -> TrigSyntaxError:
        return TrigSyntaxError(message, self.line, self.col)

    def eof(self) -> bool:
        return self.pos >= len(self.text)

    def peek(self, offset: int = 0) -> str:
        i = self.pos + offset
        return self.text[i] if i < len(self.text) else ""

    def advance(self, count: int = 1) -> str:
        chunk = self.text[self.pos : self.pos + count]
        for ch in chunk:
            if ch == "\n":
                self.line += 1
                self.col = 1
            else:
                self.col += 1
        self.pos += len(chunk)
        return chunk

    def skip_space(self) -> None:
        while not self.eof():
            ch = self.peek()
            if ch in _WS:
                self.advance()
            elif ch == "#":
                while not self.eof() and self.peek() != "\n":
                    self.advance()
            else:
                return

    # -- token readers -----------------------------------------------------

    def read_iriref(self) -> str:
        assert self.peek() == "<"
        self.advance()
        out: list[str] = []
        while True:
            if self.eof():
                raise self.error("unterminated IRI")
            ch = self.peek()
            if ch == ">":
                self.advance()
                return "".join(out)
            if ch == "\\":
                out.append(self._read_uchar())
            elif ch in '<"{}|^`' or ord(ch) <= 0x20:
                raise self.error(f"character {ch!r} not allowed inside an IRI")
            else:
                out.append(self.advance())

    def _read_uchar(self) -> str:
        self.advance()  # backslash
        kind = self.advance()
        width = {"u": 4, "U": 8}.get(kind)
        if width is None:
            raise self.error(f"bad escape \\{kind} (only \\u and \\U allowed here)")
        digits = self.advance(width)
        if len(digits) != width or any(d not in _HEX for d in digits):
            raise self.error(f"bad \\{kind} escape")
        return chr(int(digits, 16))

    def read_string(self) -> str:
        quote = self.peek()
        if self.text.startswith(quote * 3, self.pos):
            return self._read_long_string(quote)
        self.advance()
        out: list[str] = []
        while True:
            if self.eof():
                raise self.error("unterminated string")
            ch = self.peek()
            if ch == quote:
                self.advance()
                return "".join(out)
            if ch in "\n\r":
                raise self.error("newline inside a short string")
            if ch == "\\":
                out.append(self._read_string_escape())
            else:
                out.append(self.advance())

    def _read_long_string(self, quote: str) -> str:
        self.advance(3)
        out: list[str] = []
        while True:
            if self.eof():
                raise self.error("unterminated long string")
            if self.text.startswith(quote * 3, self.pos):
                self.advance(3)
                return "".join(out)
            if self.peek() == "\\":
                out.append(self._read_string_escape())
            else:
                out.append(self.advance())

    def _read_string_escape(self) -> str:
        nxt = self.peek(1)
        if nxt in ("u", "U"):
            return self._read_uchar()
        self.advance()
        kind = self.advance()
        if kind not in _STRING_ESCAPES:
            raise self.error(f"unknown string escape \\{kind}")
        return _STRING_ESCAPES[kind]

    def read_pname_local(self) -> str:
        out: list[str] = []
        while not self.eof():
            ch = self.peek()
            if _LOCAL_PLAIN.fullmatch(ch):
                out.append(self.advance())
            elif ch == "%":
                digits = self.peek(1) + self.peek(2)
                if len(digits) != 2 or any(d not in _HEX for d in digits):
                    raise self.error("bad % escape in prefixed name")
                out.append(self.advance(3))
            elif ch == "\\":
                self.advance()
                if self.eof():
                    raise self.error("dangling \\ in prefixed name")
                out.append(self.advance())
            elif ch == ".":
                # A dot belongs to the local name only when more name follows;
                # otherwise it terminates the statement.
                nxt = self.peek(1)
                if nxt and (_LOCAL_PLAIN.fullmatch(nxt) or nxt in ".%\\"):
                    out.append(self.advance())
                else:
                    break
            else:
                break
        return "".join(out)


class _Parser:
    def __init__(self, text: str, base: str) -> None:
        self.s = _Scanner(text)
        self.doc = TrigDocument(base=base, prefixes={})
        self._anon = 0

    # -- helpers ------------------------------------------------------------

    def _resolve(self, ref: str) -> Iri:
        if re.match(r"^[A-Za-z][A-Za-z0-9+.-]*:", ref):
            value = ref
        else:
            value = urljoin(self.doc.base, ref)
        try:
            return Iri(value)
        except ValueError as exc:
            raise self.s.error(str(exc)) from exc

    def _expand(self, prefix: str, local: str) -> Iri:
        if prefix not in self.doc.prefixes:
            raise self.s.error(f"undeclared prefix {prefix!r}")
        try:
            return Iri(self.doc.prefixes[prefix] + local)
        except ValueError as exc:
            raise self.s.error(str(exc)) from exc

    def _fresh_bnode(self) -> BlankNode:
        self._anon += 1
        return BlankNode(f"anon-{self._anon}")

    def _expect(self, ch: str) -> None:
        self.s.skip_space()
        if self.s.peek() != ch:
            raise self.s.error(f"expected {ch!r}, found {self.s.peek()!r}")
        self.s.advance()

    def _peek_word(self) -> str:
        m = re.match(r"[A-Za-z]+", self.s.text[self.s.pos :])
        return m.group(0) if m else ""

    # -- document -----------------------------------------------------------

    def parse(self) -> TrigDocument:
        while True:
            self.s.skip_space()
            if self.s.eof():
                return self.doc
            ch = self.s.peek()
            if ch == "@":
                self._directive_at()
            elif self._peek_word().upper() in ("PREFIX", "BASE") and self._word_is_directive():
                self._directive_sparql()
            else:
                self._block()

    def _word_is_directive(self) -> bool:
        # Distinguish the SPARQL keywords from a prefixed name like PREFIX:x.
        word = self._peek_word()
        after = self.s.peek(len(word))
        return after != ":"

    def _directive_at(self) -> None:
        self.s.advance()
        word = self._peek_word()
        if word not in ("prefix", "base"):
            raise self.s.error(f"unknown directive @{word}")
        self.s.advance(len(word))
        if word == "prefix":
            self._read_prefix_binding()
        else:
            self.s.skip_space()
            if self.s.peek() != "<":
                raise self.s.error("@base needs an IRI")
            self.doc.base = self._resolve(self.s.read_iriref()).value
        self._expect(".")

    def _directive_sparql(self) -> None:
        word = self._peek_word()
        self.s.advance(len(word))
        if word.upper() == "PREFIX":
            self._read_prefix_binding()
        else:
            self.s.skip_space()
            if self.s.peek() != "<":
                raise self.s.error("BASE needs an IRI")
            self.doc.base = self._resolve(self.s.read_iriref()).value

    def _read_prefix_binding(self) -> None:
        self.s.skip_space()
        m = _PN_PREFIX.match(self.s.text, self.s.pos)
        prefix = ""
        if m and self.s.peek() != ":":
            prefix = m.group(0)
            while prefix.endswith("."):
                prefix = prefix[:-1]
            self.s.advance(len(prefix))
        if self.s.peek() != ":":
            raise self.s.error("prefix declaration needs ':'")
        self.s.advance()
        self.s.skip_space()
        if self.s.peek() != "<":
            raise self.s.error("prefix declaration needs an IRI")
        self.doc.prefixes[prefix] = self._resolve(self.s.read_iriref()).value

    # -- graph blocks and triples --------------------------------------------

    def _block(self) -> None:
        ch = self.s.peek()
        word = self._peek_word()
        if word.upper() == "GRAPH" and self.s.peek(len(word)) != ":":
            self.s.advance(len(word))
            self.s.skip_space()
            label = self._graph_label()
            triples = self._graph_body()
            self.doc.blocks.append((label, triples))
            return
        if ch == "{":
            triples = self._graph_body()
            self.doc.blocks.append((None, triples))
            return
        if ch == "[":
            # Anonymous-subject triples go to the default graph.
            triples: list[Triple] = []
            subject = self._bnode_property_list(triples)
            self.s.skip_space()
            if self.s.peek() != ".":
                self._predicate_object_list(subject, triples)
            self._expect(".")
            self.doc.blocks.append((None, triples))
            return
        start = (self.s.line, self.s.col)
        node = self._label_or_subject()
        self.s.skip_space()
        if self.s.peek() == "{":
            if isinstance(node, BlankNode) and node.label.startswith("anon-"):
                raise TrigSyntaxError("graph label cannot be anonymous", *start)
            label = node.value if isinstance(node, Iri) else "_:" + node.label
            triples = self._graph_body()
            self.doc.blocks.append((label, triples))
        else:
            triples = []
            self._predicate_object_list(node, triples)
            self._expect(".")
            self.doc.blocks.append((None, triples))

    def _graph_label(self) -> str:
        node = self._label_or_subject()
        return node.value if isinstance(node, Iri) else "_:" + node.label

    def _label_or_subject(self) -> Iri | BlankNode:
        self.s.skip_space()
        ch = self.s.peek()
        if ch == "<":
            return self._resolve(self.s.read_iriref())
        if ch == "_":
            return self._bnode_label()
        term = self._try_pname()
        if term is not None:
            return term
        if ch in "\"'" or ch.isdigit() or ch in "+-" or (ch == "." and self.s.peek(1).isdigit()):
            raise self.s.error("literal in subject position")
        raise self.s.error(f"expected IRI or blank node, found {ch!r}")

    def _graph_body(self) -> list[Triple]:
        self._expect("{")
        triples: list[Triple] = []
        while True:
            self.s.skip_space()
            if self.s.eof():
                raise self.s.error("unterminated graph block")
            if self.s.peek() == "}":
                self.s.advance()
                return triples
            self._triples(triples)
            self.s.skip_space()
            if self.s.peek() == ".":
                self.s.advance()
            elif self.s.peek() != "}":
                raise self.s.error(f"expected '.' or '}}', found {self.s.peek()!r}")

    def _triples(self, sink: list[Triple]) -> None:
        self.s.skip_space()
        if self.s.peek() == "[":
            subject = self._bnode_property_list(sink)
            self.s.skip_space()
            if self.s.peek() not in ".}":
                self._predicate_object_list(subject, sink)
            return
        subject = self._label_or_subject()
        self._predicate_object_list(subject, sink)

    def _predicate_object_list(self, subject: Iri | BlankNode, sink: list[Triple]) -> None:
        while True:
            predicate = self._verb()
            while True:
                obj = self._object(sink)
                sink.append(Triple(subject, predicate, obj))
                self.s.skip_space()
                if self.s.peek() == ",":
                    self.s.advance()
                    continue
                break
            self.s.skip_space()
            if self.s.peek() == ";":
                self.s.advance()
                self.s.skip_space()
                # Dangling ';' before terminator is allowed.
                if self.s.peek() in ".}]" or self.s.eof():
                    return
                continue
            return

    def _verb(self) -> Iri:
        self.s.skip_space()
        ch = self.s.peek()
        if ch == "<":
            return self._resolve(self.s.read_iriref())
        term = self._try_pname()
        if term is not None:
            return term
        word = self._peek_word()
        if word == "a" and not (self.s.peek(1).isalnum() or self.s.peek(1) in "_:"):
            self.s.advance()
            return RDF_TYPE
        raise self.s.error(f"expected predicate, found {ch!r}")

    def _object(self, sink: list[Triple]) -> Term:
        self.s.skip_space()
        ch = self.s.peek()
        if ch == "<":
            return self._resolve(self.s.read_iriref())
        if ch == "_":
            return self._bnode_label()
        if ch == "[":
            return self._bnode_property_list(sink)
        if ch == "(":
            raise self.s.error("RDF collections are not supported")
        if ch in "\"'":
            return self._literal()
        if ch.isdigit() or ch in "+-" or (ch == "." and self.s.peek(1).isdigit()):
            return self._numeric_literal()
        word = self._peek_word()
        if word in ("true", "false") and self.s.peek(len(word)) != ":":
            self.s.advance(len(word))
            return Literal(word, datatype=XSD_BOOLEAN)
        term = self._try_pname()
        if term is not None:
            return term
        raise self.s.error(f"expected object term, found {ch!r}")

    def _literal(self) -> Literal:
        lexical = self.s.read_string()
        if self.s.peek() == "@":
            self.s.advance()
            m = _LANGTAG.match(self.s.text, self.s.pos)
            if not m:
                raise self.s.error("bad language tag")
            self.s.advance(len(m.group(0)))
            return Literal(lexical, language=m.group(0))
        if self.s.peek() == "^" and self.s.peek(1) == "^":
            self.s.advance(2)
            self.s.skip_space()
            if self.s.peek() == "<":
                dt = self._resolve(self.s.read_iriref())
            else:
                dt = self._try_pname()
                if dt is None:
                    raise self.s.error("expected datatype IRI after ^^")
            return Literal(lexical, datatype=dt.value)
        return Literal(lexical)

    def _numeric_literal(self) -> Literal:
        m = _NUMBER.match(self.s.text, self.s.pos)
        if not m:
            raise self.s.error("bad numeric literal")
        token = m.group(0)
        self.s.advance(len(token))
        if "e" in token.lower():
            return Literal(token, datatype=XSD_DOUBLE)
        if "." in token:
            return Literal(token, datatype=XSD_DECIMAL)
        return Literal(token, datatype=XSD_INTEGER)

    def _bnode_label(self) -> BlankNode:
        if self.s.peek(1) != ":":
            raise self.s.error("expected '_:' blank node label")
        self.s.advance(2)
        m = re.match(r"[A-Za-z0-9_][A-Za-z0-9_.-]*", self.s.text[self.s.pos :])
        if not m:
            raise self.s.error("bad blank node label")
        label = m.group(0)
        while label.endswith("."):
            label = label[:-1]
        self.s.advance(len(label))
        return BlankNode(label)

    def _bnode_property_list(self, sink: list[Triple]) -> BlankNode:
        self._expect("[")
        node = self._fresh_bnode()
        self.s.skip_space()
        if self.s.peek() == "]":
            self.s.advance()
            return node
        self._predicate_object_list(node, sink)
        self._expect("]")
        return node

    def _try_pname(self) -> Iri | None:
        pos, line, col = self.s.pos, self.s.line, self.s.col
        prefix = ""
        m = _PN_PREFIX.match(self.s.text, self.s.pos)
        if m:
            prefix = m.group(0)
            while prefix.endswith("."):
                prefix = prefix[:-1]
        if self.s.text[pos + len(prefix) : pos + len(prefix) + 1] != ":":
            return None
        self.s.advance(len(prefix) + 1)
        local = self.s.read_pname_local()
        try:
            return self._expand(prefix, local)
        except TrigSyntaxError:
            self.s.pos, self.s.line, self.s.col = pos, line, col
            raise


def read_trig(data: bytes | str, base: str = DEFAULT_BASE) -> TrigDocument:
    """Parse a TriG document. Raises TrigSyntaxError with line/col on bad input."""
    if isinstance(data, bytes):
        try:
            text = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise TrigSyntaxError(f"not valid UTF-8: {exc}", 0, 0) from None
    else:
        text = data
    return _Parser(text, base).parse()

"""Heuristic AIDA-compliance checking driven by an ordered rule set.

A rule set has two halves: EXCLUDE rules (regex + which criterion a match
violates) and STRIP rules (reporting prefixes that can be removed to leave an
acceptable claim, applied by the extraction pipeline). Rules live in a TSV
file so curators can extend them without touching code; the shipped defaults
are defined here and rendered through the same format.

The checks are deliberately shallow pattern heuristics, not NLP. They are
deterministic and total: any input yields a report.
"""

from __future__ import annotations

import re
import unicodedata
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from typing import Iterable, TextIO

from .aida import MAX_SENTENCE_LENGTH


class Criterion(Enum):
    """The four sentence criteria a text can violate."""

    NOT_ATOMIC = "NotAtomic"
    NOT_INDEPENDENT = "NotIndependent"
    NOT_DECLARATIVE = "NotDeclarative"
    NOT_ABSOLUTE = "NotAbsolute"


class Verdict(Enum):
    PERFECT = "Perfect"
    MINOR_ISSUE = "MinorIssue"
    NOT_AIDA = "NotAida"
    #: Human-curation judgment only; the automated checker never emits it.
    INACCURATE = "Inaccurate"


class RuleKind(Enum):
    EXCLUDE = "EXCLUDE"
    STRIP = "STRIP"


class RuleSetError(ValueError):
    """A rule file/line is malformed (bad column count, duplicate id, bad regex)."""


@dataclass(frozen=True)
class Rule:
    id: str
    kind: RuleKind
    violation: Criterion | None
    pattern: str
    compiled: re.Pattern = field(repr=False, compare=False, hash=False, default=None)  # type: ignore[assignment]

    def __post_init__(self) -> None:
        if self.kind is RuleKind.EXCLUDE and self.violation is None:
            raise RuleSetError(f"rule {self.id}: EXCLUDE rules need a violation kind")
        if self.kind is RuleKind.STRIP and self.violation is not None:
            raise RuleSetError(f"rule {self.id}: STRIP rules carry no violation kind")
        try:
            object.__setattr__(self, "compiled", re.compile(self.pattern, re.IGNORECASE))
        except re.error as exc:
            raise RuleSetError(f"rule {self.id}: bad pattern: {exc}") from exc


@dataclass(frozen=True)
class RuleSet:
    """Ordered exclusion and prefix-strip rules; list order is application order."""

    version: str
    exclusion_patterns: tuple[Rule, ...]
    prefix_strip_patterns: tuple[Rule, ...]

    def __post_init__(self) -> None:
        ids = [r.id for r in self.exclusion_patterns + self.prefix_strip_patterns]
        dupes = {i for i in ids if ids.count(i) > 1}
        if dupes:
            raise RuleSetError(f"duplicate rule ids: {sorted(dupes)}")


# ---------------------------------------------------------------------------
# Rule file format: <rule-id> TAB <EXCLUDE|STRIP> TAB <violation-or-empty>
# TAB <pattern>, '#' starts a comment line. Patterns are matched
# case-insensitively. A comment line '# version: X' sets the version.
# ---------------------------------------------------------------------------

_VERSION_COMMENT = re.compile(r"#\s*version:\s*(\S+)", re.IGNORECASE)


def parse_rules(lines: Iterable[str]) -> RuleSet:
    version = "unversioned"
    exclude: list[Rule] = []
    strip: list[Rule] = []
    for lineno, raw in enumerate(lines, start=1):
        line = raw.rstrip("\n")
        if not line.strip():
            continue
        if line.lstrip().startswith("#"):
            m = _VERSION_COMMENT.match(line.lstrip())
            if m:
                version = m.group(1)
            continue
        cols = line.split("\t")
        if len(cols) != 4:
            raise RuleSetError(f"line {lineno}: expected 4 tab-separated columns, got {len(cols)}")
        rule_id, kind_s, violation_s, pattern = cols
        try:
            kind = RuleKind(kind_s)
        except ValueError:
            raise RuleSetError(f"line {lineno}: unknown rule kind {kind_s!r}") from None
        violation = Criterion(violation_s) if violation_s else None
        rule = Rule(rule_id, kind, violation, pattern)
        (exclude if kind is RuleKind.EXCLUDE else strip).append(rule)
    return RuleSet(version, tuple(exclude), tuple(strip))


def load_rules(source: str | TextIO) -> RuleSet:
    """Load a rule set from a path or an open text stream."""
    if isinstance(source, str):
        with open(source, encoding="utf-8") as fh:
            return parse_rules(fh)
    return parse_rules(source)


def dump_rules(rules: RuleSet) -> str:
    lines = [f"# version: {rules.version}"]
    for rule in rules.exclusion_patterns + rules.prefix_strip_patterns:
        violation = rule.violation.value if rule.violation else ""
        lines.append(f"{rule.id}\t{rule.kind.value}\t{violation}\t{rule.pattern}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Shipped default rules
# ---------------------------------------------------------------------------

DEFAULT_RULES_VERSION = "1"

# Discourse openers that may precede a reporting frame ("In conclusion, we
# found that ..."). The bare-opener strip rule requires the comma/colon so
# that e.g. "Overall survival ..." is left alone.
_OPENER = (
    r"(?:in conclusion|in summary|in summation|taken together|taken as a whole|"
    r"collectively|altogether|overall|thus|therefore|hence|finally|furthermore|"
    r"moreover|in addition|additionally|importantly|interestingly|notably|here)"
)
_PRE = rf"(?:{_OPENER}[,:]?\s+)*"

_RESULTS_SUBJ = (
    r"(?:(?:these|those|the|our|recent) )?"
    r"(?:results?|data|findings?|observations?|analyses|analysis|studies|study|experiments?)"
    r"(?: of (?:this|the|our|these) (?:study|studies|work|analysis|report|experiments?))?"
)
_REPORT_VERB = (
    r"(?:(?:clearly|strongly|also|further|collectively) )?"
    r"(?:show(?:ed|s)?|suggest(?:ed|s)?|indicat(?:ed?|es)|demonstrat(?:ed?|es)|"
    r"reveal(?:ed|s)?|confirm(?:ed|s)?|establish(?:ed|es)?|"
    r"support the (?:idea|notion|hypothesis|view))"
)

_DEFAULT_RULE_TABLE: tuple[tuple[str, str, str | None, str], ...] = (
    # --- atomicity ---
    ("exclude/semicolon-join", "EXCLUDE", "NotAtomic", r";"),
    ("exclude/comma-clause-join", "EXCLUDE", "NotAtomic",
     r", (?:and|but|while|whereas) (?:the|a|an|this|these|those|it|there|we|they|its|their)\b"),
    ("exclude/multiple-sentences", "EXCLUDE", "NotAtomic",
     r"[a-z]{2}\.\s+[A-Z0-9(]"),
    # --- independence ---
    ("exclude/demonstrative-opening", "EXCLUDE", "NotIndependent",
     r"^(?:this|these|that|those)\s"),
    ("exclude/pronoun-opening", "EXCLUDE", "NotIndependent",
     r"^(?:it|we|they|he|she|i|our|its|their)\s"),
    ("exclude/anaphoric-phrase", "EXCLUDE", "NotIndependent",
     r"\b(?:this|these|that|those) (?:effects?|results?|findings?|observations?|"
     r"associations?|interactions?|mutations?|mechanisms?|processes|pathways?|"
     r"phenomen(?:on|a)|differences?|changes?|patients?|cases?)\b"),
    ("exclude/in-this-study", "EXCLUDE", "NotIndependent",
     r"\bin (?:this|the present|the current) (?:study|work|report|paper|article|cohort)\b"),
    ("exclude/the-authors", "EXCLUDE", "NotIndependent",
     r"\bthe (?:authors?|investigators?|researchers?)\b"),
    # --- absoluteness ---
    ("exclude/report-frame", "EXCLUDE", "NotAbsolute",
     r"\b(?:results?|stud(?:y|ies)|data|findings?|analys[ei]s|experiments?|"
     r"observations?|evidence|reports?)\b[^.;]{0,60}?"
     r"\b(?:show(?:ed|s|n)?|suggest(?:ed|s)?|indicat(?:ed?|es)|demonstrat(?:ed?|es)|"
     r"reveal(?:ed|s)?|confirm(?:ed|s)?|imply|implie[sd]|found|establish(?:ed|es)?) that\b"),
    ("exclude/verb-that-hedge", "EXCLUDE", "NotAbsolute",
     r"\b(?:suggest(?:s|ed)?|hypothesize[sd]?|propose[sd]?|speculate[sd]?|"
     r"postulate[sd]?|presume[sd]?|conclude[sd]?|appears?|seem(?:s|ed)?) that\b"),
    ("exclude/passive-report", "EXCLUDE", "NotAbsolute",
     r"\b(?:is|are|was|were|has been|have been) (?:\w+ly )?"
     r"(?:shown|found|reported|observed|demonstrated|suggested|proposed|noted|"
     r"described|thought|believed|presumed|predicted|hypothesized|considered|"
     r"speculated|postulated) to\b"),
    ("exclude/epistemic-be", "EXCLUDE", "NotAbsolute",
     r"\b(?:is|are|was|were) (?:thought|believed|presumed|considered|speculated|"
     r"postulated|hypothesized|suspected)\b"),
    ("exclude/hedge-adverb", "EXCLUDE", "NotAbsolute",
     r"\b(?:probab(?:ly|le)|possib(?:ly|le)|presumably|perhaps|likely|unlikely|"
     r"potentially|apparently|seemingly|putative(?:ly)?|suppos(?:ed|edly)|"
     r"(?<!action )(?<!membrane )potential)\b"),
    ("exclude/modal-verb", "EXCLUDE", "NotAbsolute",
     r"\b(?:may|might|could|should|would|appears to|seems to)\b"),
    # --- declarative form ---
    ("exclude/question-mark", "EXCLUDE", "NotDeclarative", r"\?\s*$"),
    ("exclude/interrogative-opening", "EXCLUDE", "NotDeclarative",
     r"^(?:what|which|who|whom|whose|when|where|why|how|is|are|was|were|am|"
     r"do|does|did|can|could|will|would|shall|should|may|might|must|have|has|had) \w"),
    # --- prefix strips (order matters: frames first, bare openers last) ---
    ("strip/results-report-that", "STRIP", None,
     rf"^{_PRE}{_RESULTS_SUBJ} {_REPORT_VERB} that\s+"),
    ("strip/we-report-that", "STRIP", None,
     rf"^{_PRE}(?:we|the authors?|authors|the investigators?) (?:(?:also|further|previously|recently) )?"
     r"(?:show(?:ed)?|find|found|report(?:ed)?|conclude[d]?|suggest(?:ed)?|propose[d]?|"
     r"demonstrate[d]?|hypothesize[d]?|observe[d]?|note[d]?|believe[d]?|establish(?:ed)?|"
     r"confirm(?:ed)?) that\s+"),
    ("strip/it-passive-that", "STRIP", None,
     rf"^{_PRE}it (?:(?:is|was|has been) (?:shown|found|reported|concluded|demonstrated|"
     r"observed|suggested|proposed|established|noted|hypothesized)|appears|seems) that\s+"),
    ("strip/study-report-that", "STRIP", None,
     rf"^{_PRE}(?:this|the present|the current|our) (?:study|report|work|analysis|meta-analysis|review) "
     r"(?:show(?:ed|s)?|demonstrat(?:ed?|es)|suggest(?:ed|s)?|indicat(?:ed?|es)|"
     r"reveal(?:ed|s)?|confirm(?:ed|s)?|provide[sd]? evidence) that\s+"),
    ("strip/discourse-opener", "STRIP", None, rf"^(?:{_OPENER}[,:]\s+)+"),
)


@lru_cache(maxsize=1)
def default_ruleset() -> RuleSet:
    """The shipped rule set (version pinned; see dump_rules for the file form)."""
    exclude = []
    strip = []
    for rule_id, kind_s, violation_s, pattern in _DEFAULT_RULE_TABLE:
        kind = RuleKind(kind_s)
        rule = Rule(rule_id, kind, Criterion(violation_s) if violation_s else None, pattern)
        (exclude if kind is RuleKind.EXCLUDE else strip).append(rule)
    return RuleSet(DEFAULT_RULES_VERSION, tuple(exclude), tuple(strip))


# ---------------------------------------------------------------------------
# The compliance check itself
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ValidationReport:
    verdict: Verdict
    violations: frozenset[Criterion]
    minor_issues: tuple[str, ...]
    matched_rules: tuple[str, ...]

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict.value,
            "violations": sorted(v.value for v in self.violations),
            "minor_issues": list(self.minor_issues),
            "matched_rules": list(self.matched_rules),
        }


_AUXILIARIES = frozenset(
    "is are was were am be been being has have had do does did "
    "can cannot could may might must shall should will would".split()
)

# Common claim verbs (third-person and base forms); the morphology fallback
# below covers the long tail.
_KNOWN_VERBS = frozenset(
    """binds regulates inhibits activates encodes mediates induces causes
    promotes suppresses modulates controls affects increases decreases reduces
    enhances impairs plays contributes interacts leads results requires
    involves protects transmits confers predicts correlates functions acts
    occurs exists remains depends underlies drives triggers blocks prevents
    disrupts alters influences stimulates represses facilitates determines
    governs produces yields improves worsens accelerates delays differs varies
    belongs carries contains displays exhibits expresses forms lacks maintains
    participates precedes follows targets supports underpins
    bind regulate inhibit activate encode mediate induce cause promote
    suppress modulate control affect increase decrease reduce enhance impair
    play contribute interact lead result require involve protect transmit
    confer predict correlate act occur exist remain depend underlie drive
    trigger block prevent disrupt alter influence stimulate repress facilitate
    determine govern produce yield improve worsen accelerate delay differ vary
    belong carry contain display exhibit express form lack maintain
    participate precede follow target support underpin""".split()
)

_NON_SUBJECT_PREPS = frozenset(
    "of in the a an and or with for by to from these those such between "
    "among as on at during without via into through toward towards versus vs".split()
)

_TOKEN = re.compile(r"[^\W_]+(?:['-][^\W_]+)*", re.UNICODE)

_INTERROGATIVE_END = re.compile(r"\?\s*$")

_COPULA_OMISSION = re.compile(
    r"^[\w()'-]+(?:[ ,][\w()'-]+){0,6}? "
    r"(?:helpful|useful|effective|beneficial|important|essential|critical|"
    r"necessary|sufficient|responsible|associated|correlated|linked|related|"
    r"involved|implicated|present|absent|elevated|reduced|increased|decreased|"
    r"overexpressed|upregulated|downregulated|higher|lower|similar|identical|"
    r"comparable|common|frequent|rare|prevalent|protective|predictive) "
    r"(?:in|for|with|to|of|among|between|during|at|against)\b",
    re.IGNORECASE,
)

_PUNCT_TYPO = re.compile(r"[,;:]{2}|\s[,.]")


def _tokens(text: str) -> list[str]:
    return _TOKEN.findall(text.lower())


def _has_finite_verb(tokens: list[str]) -> bool:
    """Liberal detector: err on the side of finding a verb."""
    for i, tok in enumerate(tokens):
        if tok in _AUXILIARIES or tok in _KNOWN_VERBS:
            return True
        if i == 0:
            continue
        if tok.endswith("ed") and len(tok) > 3:
            return True
        if tok.endswith("s") and len(tok) > 2 and tokens[i - 1] not in _NON_SUBJECT_PREPS:
            return True
    return False


def validate(text: str, rules: RuleSet | None = None) -> ValidationReport:
    """Check arbitrary text against the sentence criteria. Total and
    deterministic; never raises."""
    if rules is None:
        rules = default_ruleset()

    work = unicodedata.normalize("NFC", text).strip()
    violations: set[Criterion] = set()
    minor: list[str] = []
    matched: list[str] = []

    def flag(criterion: Criterion, rule_id: str) -> None:
        violations.add(criterion)
        matched.append(rule_id)

    if not work:
        flag(Criterion.NOT_DECLARATIVE, "builtin/empty")
        return ValidationReport(Verdict.NOT_AIDA, frozenset(violations), (), tuple(matched))

    if any(unicodedata.category(ch) == "Cc" or ch in "  " for ch in work):
        flag(Criterion.NOT_DECLARATIVE, "builtin/control-character")
    if not work.endswith(".") or work.endswith(".."):
        flag(Criterion.NOT_DECLARATIVE, "builtin/terminal-stop")
    if _INTERROGATIVE_END.search(work):
        flag(Criterion.NOT_DECLARATIVE, "builtin/interrogative")
    if len(work) > MAX_SENTENCE_LENGTH:
        flag(Criterion.NOT_ATOMIC, "builtin/over-length")

    if text != work:
        minor.append("surrounding whitespace")
    first_cased = next((ch for ch in work if ch.isalpha()), "")
    if first_cased and first_cased.islower():
        minor.append("lowercase sentence opening")
    if "  " in work:
        minor.append("consecutive spaces")
    if _PUNCT_TYPO.search(work):
        minor.append("suspicious punctuation")

    for rule in rules.exclusion_patterns:
        if rule.compiled.search(work):
            flag(rule.violation, rule.id)  # type: ignore[arg-type]

    if not _has_finite_verb(_tokens(work)):
        if _COPULA_OMISSION.match(work):
            minor.append("missing copula")
        else:
            flag(Criterion.NOT_DECLARATIVE, "builtin/no-finite-verb")

    if violations:
        verdict = Verdict.NOT_AIDA
    elif minor:
        verdict = Verdict.MINOR_ISSUE
    else:
        verdict = Verdict.PERFECT
    return ValidationReport(verdict, frozenset(violations), tuple(minor), tuple(matched))

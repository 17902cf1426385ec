"""Corpus extraction: GeneRIF-style TSV in, sentence nanopublications out.

Each record's free text is cleaned of one reporting prefix (strip rules),
checked against the rule set, and accepted when the verdict is Perfect or
MinorIssue. Duplicate post-strip sentences collapse into a single
nanopublication whose provenance merges the source PMIDs. Every decision is
tallied in a report whose counting invariant (accepted + rejected = total)
is enforced.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from datetime import datetime
from typing import Iterable, Iterator

from .aida import AidaSentence
from .nanopub import Channel, Nanopublication, Provenance, build_aida_nanopub
from .validation import Criterion, RuleSet, Verdict, default_ruleset, validate

PUBMED_PREFIX = "https://pubmed.ncbi.nlm.nih.gov/"


@dataclass(frozen=True)
class GeneRifRecord:
    tax_id: int
    gene_id: int
    pmids: tuple[int, ...]
    last_update: datetime
    text: str

    def __post_init__(self) -> None:
        if self.gene_id <= 0:
            raise ValueError("gene_id must be positive")
        if not self.pmids:
            raise ValueError("record needs at least one PMID")
        if not self.text:
            raise ValueError("record text is empty")


@dataclass(frozen=True)
class ParseWarning:
    line: int
    message: str


_TIMESTAMP_FORMATS = ("%Y-%m-%d %H:%M", "%Y-%m-%d %H:%M:%S", "%Y-%m-%d")


def _parse_timestamp(value: str) -> datetime:
    for fmt in _TIMESTAMP_FORMATS:
        try:
            return datetime.strptime(value, fmt)
        except ValueError:
            continue
    raise ValueError(f"bad timestamp {value!r}")


def parse_generif(
    stream: Iterable[str], warnings: list[ParseWarning] | None = None
) -> Iterator[GeneRifRecord]:
    """Yield records from TSV lines (tax id, gene id, comma-separated PMIDs,
    timestamp, text). Malformed lines become warnings, not errors."""
    for lineno, raw in enumerate(stream, start=1):
        line = raw.rstrip("\r\n")
        if not line or line.startswith("#"):
            continue
        cols = line.split("\t")
        if len(cols) != 5:
            if warnings is not None:
                warnings.append(ParseWarning(lineno, f"expected 5 columns, got {len(cols)}"))
            continue
        try:
            record = GeneRifRecord(
                tax_id=int(cols[0]),
                gene_id=int(cols[1]),
                pmids=tuple(int(p) for p in cols[2].split(",") if p.strip()),
                last_update=_parse_timestamp(cols[3]),
                text=cols[4].strip(),
            )
        except ValueError as exc:
            if warnings is not None:
                warnings.append(ParseWarning(lineno, str(exc)))
            continue
        yield record


def strip_prefix(text: str, rules: RuleSet | None = None) -> tuple[str, str | None]:
    """Remove one reporting prefix when a strip rule matches at the start,
    recapitalizing the remainder. Returns (text, applied rule id or None)."""
    if rules is None:
        rules = default_ruleset()
    for rule in rules.prefix_strip_patterns:
        m = rule.compiled.match(text)
        if m and m.end() > 0:
            rest = text[m.end():]
            if rest:
                rest = rest[0].upper() + rest[1:]
            return rest, rule.id
    return text, None


@dataclass
class ExtractionReport:
    total: int = 0
    accepted: int = 0
    stripped_prefix_count: int = 0
    duplicates_merged: int = 0
    rejected_by_rule: dict[str, int] = field(default_factory=dict)
    verdict_counts: dict[str, int] = field(default_factory=dict)
    violation_counts: dict[str, int] = field(default_factory=dict)

    def rejected_total(self) -> int:
        return sum(self.rejected_by_rule.values())

    def check_counts(self) -> None:
        if self.accepted + self.rejected_total() != self.total:
            raise AssertionError(
                f"count invariant broken: {self.accepted} accepted + "
                f"{self.rejected_total()} rejected != {self.total} total"
            )


_CATEGORY_ROWS = (
    ("perfect", Verdict.PERFECT.value),
    ("typo etc.", Verdict.MINOR_ISSUE.value),
    ("not AIDA", Verdict.NOT_AIDA.value),
    ("not atomic", Criterion.NOT_ATOMIC.value),
    ("not independent", Criterion.NOT_INDEPENDENT.value),
    ("not declarative", Criterion.NOT_DECLARATIVE.value),
    ("not absolute", Criterion.NOT_ABSOLUTE.value),
)


def extract_corpus(
    records: Iterable[GeneRifRecord],
    rules: RuleSet | None = None,
    prov_template: Provenance | None = None,
    salt: str = "",
) -> tuple[list[Nanopublication], ExtractionReport]:
    """Run the full pipeline over the records. The provenance template must
    name the extractor bot and use the TextMining channel; each output
    publication derives from the PMIDs of all records that produced its
    sentence."""
    if rules is None:
        rules = default_ruleset()
    if prov_template is None:
        raise ValueError("extract_corpus needs a provenance template")
    if prov_template.created_by_channel is not Channel.TEXT_MINING:
        raise ValueError("extraction provenance must use the TextMining channel")

    report = ExtractionReport()
    # sentence text -> (first-seen index, sorted pmid set)
    accepted: dict[str, set[int]] = {}

    for record in records:
        report.total += 1
        text, applied = strip_prefix(record.text, rules)
        if applied is not None:
            report.stripped_prefix_count += 1
        result = validate(text, rules)
        report.verdict_counts[result.verdict.value] = (
            report.verdict_counts.get(result.verdict.value, 0) + 1
        )
        for violation in result.violations:
            report.violation_counts[violation.value] = (
                report.violation_counts.get(violation.value, 0) + 1
            )
        if result.verdict in (Verdict.PERFECT, Verdict.MINOR_ISSUE):
            report.accepted += 1
            key = AidaSentence(text).text
            if key in accepted:
                report.duplicates_merged += 1
            accepted.setdefault(key, set()).update(record.pmids)
        else:
            first_rule = result.matched_rules[0] if result.matched_rules else "unmatched"
            report.rejected_by_rule[first_rule] = report.rejected_by_rule.get(first_rule, 0) + 1

    nanopubs = []
    for text, pmids in accepted.items():  # insertion order = input order
        prov = replace(
            prov_template,
            derived_from=tuple(PUBMED_PREFIX + f"{p}/" for p in sorted(pmids)),
        )
        nanopubs.append(build_aida_nanopub(AidaSentence(text), prov, salt=salt))

    report.check_counts()
    return nanopubs, report


def emit_quality_report(report: ExtractionReport, format: str = "text") -> bytes:
    """Render the category distribution, one row per category, as percentages
    of the total (mirroring the usual quality bar chart)."""

    def count_for(key: str) -> int:
        return report.verdict_counts.get(key, 0) or report.violation_counts.get(key, 0)

    rows: list[tuple[str, int]] = [("total", report.total)]
    for label, key in _CATEGORY_ROWS:
        rows.append((label, count_for(key)))
    rows.append(("stripped prefix", report.stripped_prefix_count))
    rows.append(("accepted", report.accepted))

    if format == "csv":
        lines = ["category,count,percent"]
        for label, count in rows:
            pct = f"{100.0 * count / report.total:.1f}" if report.total else "n/a"
            lines.append(f"{label},{count},{pct}")
    elif format == "text":
        lines = []
        for label, count in rows:
            pct = f"{100.0 * count / report.total:.1f}%" if report.total else "n/a"
            lines.append(f"{label}, {pct}")
    else:
        raise ValueError(f"unknown report format {format!r}")
    return ("\n".join(lines) + "\n").encode("utf-8")


def parse_quality_csv(data: bytes | str) -> dict[str, int]:
    """Counts by category from a csv-format quality report."""
    text = data.decode("utf-8") if isinstance(data, bytes) else data
    counts = {}
    for line in text.splitlines()[1:]:
        if not line.strip():
            continue
        label, count, _pct = line.rsplit(",", 2)
        counts[label] = int(count)
    return counts

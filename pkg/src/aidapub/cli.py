"""Command line driver: every pipeline stage is reachable without the UI.

Exit codes: 0 success, 1 operational failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import gzip
import json
import os
import sys
import urllib.error
import urllib.request
from datetime import datetime, timezone
from pathlib import Path

from .aida import AidaCodecError, AidaSentence, InvalidSentence, decode_uri, encode_uri
from .clustering import (
    ClusterParams,
    cluster_corpus,
    emit_relation_nanopubs,
    vectors_from_sentences,
)
from .extraction import ParseWarning, extract_corpus, emit_quality_report, parse_generif
from .nanopub import Channel, Provenance, parse_trig, serialize_trig_many
from .validation import default_ruleset, load_rules, validate

EXTRACTOR_AGENT = "urn:aidapub:agent:generif-extractor"
CLUSTER_AGENT = "urn:aidapub:agent:sentence-clusterer"


def _fail(message: str) -> int:
    print(message, file=sys.stderr)
    return 1


def _load_rules(path: str | None):
    return load_rules(path) if path else default_ruleset()


def _parse_timestamp(value: str | None) -> datetime:
    if value is None:
        return datetime.now(timezone.utc)
    dt = datetime.fromisoformat(value.replace("Z", "+00:00"))
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=timezone.utc)
    return dt


def cmd_encode(args: argparse.Namespace) -> int:
    try:
        print(encode_uri(AidaSentence(args.text)))
    except InvalidSentence as exc:
        return _fail(f"InvalidSentence: {exc}")
    return 0


def cmd_decode(args: argparse.Namespace) -> int:
    try:
        print(decode_uri(args.uri).text)
    except AidaCodecError as exc:
        return _fail(f"{type(exc).__name__}: {exc}")
    return 0


def cmd_validate(args: argparse.Namespace) -> int:
    rules = _load_rules(args.rules)
    stream = open(args.input, encoding="utf-8") if args.input else sys.stdin
    try:
        for line in stream:
            text = line.rstrip("\n")
            if not text.strip():
                continue
            report = validate(text, rules)
            violations = ",".join(sorted(v.value for v in report.violations)) or "-"
            print(f"{report.verdict.value}\t{violations}\t{text}")
    finally:
        if stream is not sys.stdin:
            stream.close()
    return 0


def _open_maybe_gzip(path: str):
    if path.endswith(".gz"):
        return gzip.open(path, "rt", encoding="utf-8")
    return open(path, encoding="utf-8")


def cmd_extract(args: argparse.Namespace) -> int:
    rules = _load_rules(args.rules)
    prov = Provenance(
        attributed_to=args.agent,
        generated_at=_parse_timestamp(args.timestamp),
        created_by_channel=Channel.TEXT_MINING,
    )
    warnings: list[ParseWarning] = []
    try:
        with _open_maybe_gzip(args.input) as stream:
            records = parse_generif(stream, warnings)
            nanopubs, report = extract_corpus(records, rules, prov, salt=args.salt)
    except OSError as exc:
        return _fail(str(exc))
    for warning in warnings:
        print(f"warning: line {warning.line}: {warning.message}", file=sys.stderr)
    Path(args.out).write_bytes(serialize_trig_many(nanopubs))
    Path(args.report).write_bytes(emit_quality_report(report, args.report_format))
    print(f"accepted {report.accepted} of {report.total} records -> {len(nanopubs)} nanopubs")
    return 0


def _load_cluster_sentences(path: str) -> list[AidaSentence]:
    if path.endswith(".trig"):
        sentences = []
        for np in parse_trig(Path(path).read_bytes()):
            uri = np.sentence_uri()
            if uri is not None:
                sentences.append(decode_uri(uri))
        return sentences
    sentences = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            text = line.strip()
            if text:
                sentences.append(AidaSentence(text))
    return sentences


def cmd_cluster(args: argparse.Namespace) -> int:
    try:
        sentences = _load_cluster_sentences(args.input)
    except (OSError, InvalidSentence, AidaCodecError) as exc:
        return _fail(f"{type(exc).__name__}: {exc}")
    params = ClusterParams(
        n1=args.n1,
        n2=args.n2,
        repetitions=args.reps,
        tau=args.tau,
        co_membership_quorum=args.quorum,
    )
    try:
        vectors = vectors_from_sentences(sentences)
        clusters, pairs = cluster_corpus(vectors, params, seed=args.seed)
    except ValueError as exc:
        return _fail(str(exc))

    prov = Provenance(
        attributed_to=args.agent,
        generated_at=_parse_timestamp(args.timestamp),
        created_by_channel=Channel.BOT,
    )
    nanopubs = emit_relation_nanopubs(pairs, prov, params, seed=args.seed, salt=args.salt)
    Path(args.out).write_bytes(serialize_trig_many(nanopubs))

    if args.csv:
        lines = ["base_uri,member_uri,median_distance,is_isolate"]
        for cluster in clusters:
            flag = "true" if cluster.is_isolate else "false"
            if cluster.is_isolate:
                lines.append(f"{cluster.base},,{cluster.median_distance:.6f},{flag}")
            else:
                for member in sorted(cluster.members):
                    lines.append(f"{cluster.base},{member},{cluster.median_distance:.6f},{flag}")
        Path(args.csv).write_text("\n".join(lines) + "\n", encoding="utf-8")
    isolates = sum(1 for c in clusters if c.is_isolate)
    print(f"{len(clusters)} sentences, {isolates} isolates, {len(pairs)} candidate pairs")
    return 0


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import create_app
    from .store import NanopubStore

    if not args.journal:
        print("serve needs --journal or AIDAPUB_JOURNAL", file=sys.stderr)
        return 2
    host, _, port = args.listen.rpartition(":")
    app = create_app(NanopubStore(args.journal))
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port), log_level="warning")
    return 0


def cmd_publish(args: argparse.Namespace) -> int:
    try:
        body = Path(args.file).read_bytes()
    except OSError as exc:
        return _fail(str(exc))
    request = urllib.request.Request(
        args.server.rstrip("/") + "/nanopubs",
        data=body,
        headers={"Content-Type": "application/trig"},
        method="POST",
    )
    try:
        with urllib.request.urlopen(request) as response:
            payload = json.load(response)
    except urllib.error.HTTPError as exc:
        detail = exc.read().decode("utf-8", "replace")
        return _fail(f"server rejected the publication ({exc.code}): {detail}")
    except urllib.error.URLError as exc:
        return _fail(f"cannot reach server: {exc.reason}")
    for receipt in payload.get("receipts", []):
        print(receipt["uri"])
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="aidapub", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("encode", help="sentence -> sentence URI")
    p.add_argument("text")
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("decode", help="sentence URI -> sentence")
    p.add_argument("uri")
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("validate", help="per-line compliance verdicts (TSV to stdout)")
    p.add_argument("--rules", help="rule file (defaults to the shipped set)")
    p.add_argument("--input", help="read lines from a file instead of stdin")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("extract", help="GeneRIF TSV -> sentence nanopubs + quality report")
    p.add_argument("--input", required=True, help="TSV file, optionally .gz")
    p.add_argument("--rules")
    p.add_argument("--out", required=True, help="TriG output path")
    p.add_argument("--report", required=True, help="quality report output path")
    p.add_argument("--report-format", choices=("text", "csv"), default="text")
    p.add_argument("--agent", default=EXTRACTOR_AGENT)
    p.add_argument("--timestamp", help="ISO timestamp recorded in provenance (default: now)")
    p.add_argument("--salt", default="")
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("cluster", help="cluster sentences, emit relation candidates")
    p.add_argument("--input", required=True, help=".trig of nanopubs or text file of sentences")
    p.add_argument("--n1", type=int, default=20)
    p.add_argument("--n2", type=int, default=10)
    p.add_argument("--reps", type=int, default=10)
    p.add_argument("--tau", type=float, default=0.65)
    p.add_argument("--quorum", type=float, default=0.5)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--out", required=True, help="TriG output for relation nanopubs")
    p.add_argument("--csv", help="CSV output of clusters")
    p.add_argument("--agent", default=CLUSTER_AGENT)
    p.add_argument("--timestamp")
    p.add_argument("--salt", default="")
    p.set_defaults(func=cmd_cluster)

    p = sub.add_parser("serve", help="run the portal service")
    p.add_argument("--listen", default=os.environ.get("AIDAPUB_LISTEN", "127.0.0.1:8646"))
    p.add_argument("--journal", default=os.environ.get("AIDAPUB_JOURNAL"),
                   help="journal file (or env AIDAPUB_JOURNAL)")
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("publish", help="POST a TriG file to a running portal")
    p.add_argument("--server", required=True)
    p.add_argument("file")
    p.set_defaults(func=cmd_publish)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())

import gzip
from datetime import datetime

import pytest

from aidapub import (
    GeneRifRecord,
    Verdict,
    decode_uri,
    emit_quality_report,
    extract_corpus,
    parse_generif,
    provenance_of,
    strip_prefix,
    validate,
)
from aidapub.extraction import ParseWarning, parse_quality_csv
from conftest import FIXTURES


class TestParseGenerif:
    def test_single_line(self):
        line = "9606\t348\t11218245\t2002-05-22 14:07\tAPOE is associated with Alzheimer disease.\n"
        (record,) = list(parse_generif([line]))
        assert record == GeneRifRecord(
            9606, 348, (11218245,), datetime(2002, 5, 22, 14, 7),
            "APOE is associated with Alzheimer disease.",
        )

    def test_empty_input(self):
        assert list(parse_generif([])) == []

    def test_malformed_lines_become_warnings(self):
        warnings: list[ParseWarning] = []
        lines = [
            "9606\t348\t11218245\t2002-05-22 14:07\n",  # missing text column
            "not-a-number\t1\t2\t2002-05-22 14:07\tText here.\n",
            "9606\t0\t2\t2002-05-22 14:07\tGene id zero.\n",
            "9606\t348\t\t2002-05-22 14:07\tNo pmids.\n",
            "9606\t349\t11218246\t2003-01-02 09:30\tValid line stays.\n",
        ]
        records = list(parse_generif(lines, warnings))
        assert [r.gene_id for r in records] == [349]
        assert sorted(w.line for w in warnings) == [1, 2, 3, 4]

    def test_multiple_pmids(self):
        line = "9606\t7157\t111,222,333\t2010-01-01 00:00\tTP53 is a tumor suppressor.\n"
        (record,) = list(parse_generif([line]))
        assert record.pmids == (111, 222, 333)

    def test_comment_lines_skipped(self):
        lines = ["#Tax ID\tGene ID\tPMIDs\tdate\ttext\n"]
        assert list(parse_generif(lines)) == []


class TestStripPrefix:
    def test_paper_prefix_results_indicated(self):
        out, rule = strip_prefix("These results clearly indicated that gene X binds protein Y.")
        assert out == "Gene X binds protein Y."
        assert rule is not None

    def test_paper_prefix_authors_propose(self):
        out, rule = strip_prefix("The authors propose that X inhibits Y.")
        assert out == "X inhibits Y."
        assert rule is not None

    def test_no_prefix_unchanged(self):
        out, rule = strip_prefix("Malaria is transmitted by mosquitoes.")
        assert out == "Malaria is transmitted by mosquitoes."
        assert rule is None

    def test_at_most_one_strip(self):
        # the combined frame swallows the discourse opener in one application
        out, rule = strip_prefix("In conclusion, we found that X binds Y.")
        assert out == "X binds Y."

    def test_idempotent_on_fixture_corpus(self):
        with open(FIXTURES / "generif_fixture.tsv", encoding="utf-8") as fh:
            for record in parse_generif(fh):
                once, _ = strip_prefix(record.text)
                twice, again = strip_prefix(once)
                assert twice == once and again is None


def load_labels():
    labels = {}
    with open(FIXTURES / "generif_expected.tsv", encoding="utf-8") as fh:
        for line in fh:
            if line.startswith("#") or not line.strip():
                continue
            n, disposition, verdict, violations, stripped, final = line.rstrip("\n").split("\t")
            labels[int(n)] = {
                "disposition": disposition,
                "verdict": verdict,
                "violations": set() if violations == "-" else set(violations.split(",")),
                "stripped": stripped == "y",
                "final": final,
            }
    return labels


class TestFixtureOracle:
    """The 200-line corpus was labeled by applying the shipped rule file by
    hand; extraction must reproduce the labels exactly."""

    def test_per_line_outcomes(self):
        labels = load_labels()
        with open(FIXTURES / "generif_fixture.tsv", encoding="utf-8") as fh:
            records = list(parse_generif(fh))
        assert len(records) == 200
        for i, record in enumerate(records, start=1):
            expected = labels[i]
            out, applied = strip_prefix(record.text)
            report = validate(out)
            assert out == expected["final"], f"line {i}"
            assert (applied is not None) == expected["stripped"], f"line {i}"
            assert report.verdict.value == expected["verdict"], f"line {i}"
            assert {v.value for v in report.violations} == expected["violations"], f"line {i}"

    def test_aggregate_report_matches_hand_tally(self, mining_prov):
        labels = load_labels()
        with open(FIXTURES / "generif_fixture.tsv", encoding="utf-8") as fh:
            nanopubs, report = extract_corpus(parse_generif(fh), prov_template=mining_prov)

        accepted_lines = [l for l in labels.values() if l["disposition"] == "accept"]
        expected_sentences = {l["final"] for l in accepted_lines}
        assert report.total == 200
        assert report.accepted == len(accepted_lines)
        assert report.stripped_prefix_count == sum(1 for l in labels.values() if l["stripped"])
        assert report.duplicates_merged == len(accepted_lines) - len(expected_sentences)
        for verdict in ("Perfect", "MinorIssue", "NotAida"):
            assert report.verdict_counts.get(verdict, 0) == sum(
                1 for l in labels.values() if l["verdict"] == verdict
            ), verdict
        for violation in ("NotAtomic", "NotIndependent", "NotDeclarative", "NotAbsolute"):
            assert report.violation_counts.get(violation, 0) == sum(
                1 for l in labels.values() if violation in l["violations"]
            ), violation
        report.check_counts()

        got_sentences = {decode_uri(np.sentence_uri()).text for np in nanopubs}
        assert got_sentences == expected_sentences
        assert len(nanopubs) == len(expected_sentences)


class TestExtractCorpus:
    def test_empty_corpus(self, mining_prov):
        nanopubs, report = extract_corpus([], prov_template=mining_prov)
        assert nanopubs == [] and report.total == 0

    def test_small_hand_labeled_corpus(self, mining_prov):
        # 20 lines, 12 accepted (labels derived by hand like the big fixture)
        rows = [
            ("APOE4 increases the risk of Alzheimer disease.", True),
            ("BRCA1 mutations impair DNA repair.", True),
            ("Malaria is transmitted by mosquitoes.", True),
            ("CFTR encodes a chloride channel.", True),
            ("Aspirin inhibits cyclooxygenase activity.", True),
            ("IL6 promotes Th17 differentiation.", True),
            ("Estrogen protects against bone loss.", True),
            ("Imatinib induces remission in leukemia.", True),
            ("These results clearly indicated that gene X binds protein Y.", True),
            ("The authors propose that SIRT1 extends lifespan in mammals.", True),
            ("Serum ferritin higher in patients with hemochromatosis.", True),
            ("ACE2 mediates cellular entry of coronaviruses.", True),
            ("Polymorphisms in IL6 may influence sepsis severity.", False),
            ("This effect is stronger in older patients.", False),
            ("TP63 isoforms regulate epidermal differentiation", False),
            ("EGFR mutations predict response; KRAS mutations predict resistance.", False),
            ("Does vitamin C prevent the common cold?", False),
            ("We think that this mutation may be pathogenic.", False),
            ("Analysis of twin cohorts found that genetics explains intelligence.", False),
            ("GHR deletion is frequent in Laron syndrome..", False),
        ]
        lines = [
            f"9606\t{100 + i}\t{500 + i}\t2012-09-01 10:0{i % 10}\t{text}"
            for i, (text, _) in enumerate(rows)
        ]
        nanopubs, report = extract_corpus(parse_generif(lines), prov_template=mining_prov)
        assert report.total == 20
        assert report.accepted == 12
        assert len(nanopubs) == 12

    def test_duplicates_merge_pmids(self, mining_prov):
        lines = [
            "9606\t1\t101\t2012-01-01 00:00\tACE2 mediates viral entry.",
            "9606\t2\t202\t2012-01-02 00:00\tIt was shown that ACE2 mediates viral entry.",
        ]
        nanopubs, report = extract_corpus(parse_generif(lines), prov_template=mining_prov)
        assert len(nanopubs) == 1 and report.duplicates_merged == 1
        prov = provenance_of(nanopubs[0])
        assert prov.derived_from == (
            "https://pubmed.ncbi.nlm.nih.gov/101/",
            "https://pubmed.ncbi.nlm.nih.gov/202/",
        )

    def test_accepted_sentences_self_consistent(self, mining_prov):
        with open(FIXTURES / "generif_fixture.tsv", encoding="utf-8") as fh:
            nanopubs, _ = extract_corpus(parse_generif(fh), prov_template=mining_prov)
        for np in nanopubs:
            verdict = validate(decode_uri(np.sentence_uri()).text).verdict
            assert verdict in (Verdict.PERFECT, Verdict.MINOR_ISSUE)

    def test_determinism(self, mining_prov):
        def run():
            with open(FIXTURES / "generif_fixture.tsv", encoding="utf-8") as fh:
                return extract_corpus(parse_generif(fh), prov_template=mining_prov)

        first_pubs, first_report = run()
        second_pubs, second_report = run()
        assert first_pubs == second_pubs
        assert first_report == second_report

    def test_wrong_channel_rejected(self, curator_prov):
        with pytest.raises(ValueError):
            extract_corpus([], prov_template=curator_prov)

    def test_gzip_input_equals_plain(self, mining_prov, tmp_path):
        raw = (FIXTURES / "generif_fixture.tsv").read_bytes()
        gz_path = tmp_path / "fixture.tsv.gz"
        gz_path.write_bytes(gzip.compress(raw))
        with gzip.open(gz_path, "rt", encoding="utf-8") as fh:
            gz_pubs, gz_report = extract_corpus(parse_generif(fh), prov_template=mining_prov)
        with open(FIXTURES / "generif_fixture.tsv", encoding="utf-8") as fh:
            plain_pubs, plain_report = extract_corpus(parse_generif(fh), prov_template=mining_prov)
        assert gz_pubs == plain_pubs and gz_report == plain_report


class TestQualityReport:
    def test_paper_style_percent_row(self, mining_prov):
        from aidapub.extraction import ExtractionReport

        report = ExtractionReport(total=250, accepted=185)
        report.verdict_counts = {"Perfect": 177, "MinorIssue": 8, "NotAida": 65}
        text = emit_quality_report(report, "text").decode()
        assert "perfect, 70.8%" in text

    def test_zero_total_gives_na(self):
        from aidapub.extraction import ExtractionReport

        text = emit_quality_report(ExtractionReport(), "text").decode()
        assert "n/a" in text and "%" not in text

    def test_csv_roundtrip(self, mining_prov):
        with open(FIXTURES / "generif_fixture.tsv", encoding="utf-8") as fh:
            _, report = extract_corpus(parse_generif(fh), prov_template=mining_prov)
        counts = parse_quality_csv(emit_quality_report(report, "csv"))
        assert counts["total"] == report.total
        assert counts["perfect"] == report.verdict_counts["Perfect"]
        assert counts["not atomic"] == report.violation_counts["NotAtomic"]
        assert counts["stripped prefix"] == report.stripped_prefix_count

import sys
from datetime import datetime, timezone
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from aidapub import AidaSentence, Channel, Provenance

FIXTURES = Path(__file__).parent / "fixtures"

MALARIA = "Malaria is transmitted by mosquitoes."
MALARIA_URI = "http://purl.org/aida/Malaria+is+transmitted+by+mosquitoes."


@pytest.fixture
def malaria() -> AidaSentence:
    return AidaSentence(MALARIA)


@pytest.fixture
def curator_prov() -> Provenance:
    return Provenance(
        attributed_to="https://orcid.org/0000-0001-2345-6789",
        generated_at=datetime(2026, 8, 10, 12, 0, tzinfo=timezone.utc),
        derived_from=("https://pubmed.ncbi.nlm.nih.gov/11218245/",),
        created_by_channel=Channel.CURATOR,
    )


@pytest.fixture
def mining_prov() -> Provenance:
    return Provenance(
        attributed_to="urn:aidapub:agent:generif-extractor",
        generated_at=datetime(2026, 8, 10, 12, 0, tzinfo=timezone.utc),
        created_by_channel=Channel.TEXT_MINING,
    )


@pytest.fixture
def bot_prov() -> Provenance:
    return Provenance(
        attributed_to="urn:aidapub:agent:sentence-clusterer",
        generated_at=datetime(2026, 8, 10, 12, 0, tzinfo=timezone.utc),
        created_by_channel=Channel.BOT,
    )

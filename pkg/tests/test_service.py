from urllib.parse import quote

import pytest
from fastapi.testclient import TestClient

from aidapub import (
    AidaSentence,
    NanopubStore,
    build_aida_nanopub,
    encode_uri,
    serialize_trig,
    serialize_trig_many,
)
from aidapub.service import create_app
from conftest import MALARIA_URI

ALICE = "https://example.org/people/alice"


@pytest.fixture
def client(tmp_path):
    app = create_app(NanopubStore(tmp_path / "journal.trig"))
    with TestClient(app) as client:
        client.post("/agents", json={"iri": ALICE, "display_name": "Alice", "kind": "Person"})
        yield client


def publish_malaria(client, malaria, curator_prov) -> str:
    np = build_aida_nanopub(malaria, curator_prov)
    response = client.post(
        "/nanopubs", content=serialize_trig(np), headers={"Content-Type": "application/trig"}
    )
    assert response.status_code == 201
    return response.json()["receipts"][0]["uri"]


class TestNanopubEndpoints:
    def test_publish_returns_receipts(self, client, malaria, curator_prov):
        uri = publish_malaria(client, malaria, curator_prov)
        assert uri.startswith("urn:aidapub:")

    def test_publish_many_in_one_document(self, client, malaria, curator_prov, mining_prov):
        pubs = [
            build_aida_nanopub(malaria, curator_prov),
            build_aida_nanopub(AidaSentence("CFTR encodes a chloride channel."), mining_prov),
        ]
        response = client.post("/nanopubs", content=serialize_trig_many(pubs))
        assert response.status_code == 201
        assert len(response.json()["receipts"]) == 2

    def test_invalid_trig_is_400(self, client):
        response = client.post("/nanopubs", content=b"this is not trig {")
        assert response.status_code == 400

    def test_fetch_nanopub_as_trig(self, client, malaria, curator_prov):
        uri = publish_malaria(client, malaria, curator_prov)
        response = client.get("/nanopubs/" + quote(uri, safe=""))
        assert response.status_code == 200
        assert response.headers["content-type"].startswith("application/trig")
        assert b"npx:asSentence" in response.content

    def test_fetch_unknown_nanopub_404(self, client):
        assert client.get("/nanopubs/" + quote("urn:aidapub:missing", safe="")).status_code == 404


class TestStatementEndpoint:
    def test_percent_encoded_statement_path(self, client, malaria, curator_prov):
        publish_malaria(client, malaria, curator_prov)
        response = client.get("/statements/" + quote(MALARIA_URI, safe=""))
        assert response.status_code == 200
        body = response.json()
        assert body["sentence"] == malaria.text
        assert len(body["asserting_nanopubs"]) == 1

    def test_unknown_sentence_empty_view(self, client):
        uri = encode_uri(AidaSentence("Entirely novel claim sentence."))
        body = client.get("/statements/" + quote(uri, safe="")).json()
        assert body["asserting_nanopubs"] == [] and body["opinions"] == []

    def test_malformed_uri_400(self, client):
        assert client.get("/statements/urn:ex:nope").status_code == 400


class TestOpinionAndLinkEndpoints:
    def test_opinion_flow(self, client, malaria, curator_prov):
        publish_malaria(client, malaria, curator_prov)
        response = client.post(
            "/opinions", json={"agent": ALICE, "statement": MALARIA_URI, "kind": "Agrees"}
        )
        assert response.status_code == 201
        body = client.get("/statements/" + quote(MALARIA_URI, safe="")).json()
        assert [o["kind"] for o in body["opinions"]] == ["Agrees"]

    def test_unknown_agent_400(self, client):
        response = client.post(
            "/opinions",
            json={"agent": "https://example.org/nobody", "statement": MALARIA_URI, "kind": "Agrees"},
        )
        assert response.status_code == 400
        assert response.json()["error"] == "UnknownAgent"

    def test_link_and_symmetry(self, client, malaria, curator_prov):
        publish_malaria(client, malaria, curator_prov)
        other = encode_uri(AidaSentence("Mosquito bites transmit malaria."))
        response = client.post(
            "/links",
            json={"agent": ALICE, "a": MALARIA_URI, "b": other, "relation": "hasSameMeaning"},
        )
        assert response.status_code == 201
        body = client.get("/statements/" + quote(other, safe="")).json()
        assert [l["other"] for l in body["related"]] == [MALARIA_URI]

    def test_self_link_400(self, client):
        response = client.post(
            "/links",
            json={"agent": ALICE, "a": MALARIA_URI, "b": MALARIA_URI, "relation": "hasSameMeaning"},
        )
        assert response.status_code == 400
        assert response.json()["error"] == "SelfLink"


class TestSearchAndValidate:
    def test_search_ranks_stored_sentence(self, client, malaria, curator_prov):
        publish_malaria(client, malaria, curator_prov)
        body = client.get("/search", params={"q": "malaria mosquitoes"}).json()
        assert body["results"][0]["uri"] == MALARIA_URI

    def test_empty_query(self, client):
        assert client.get("/search", params={"q": ""}).json()["results"] == []

    def test_validate_endpoint_matches_library(self, client):
        body = client.post("/validate", json={"text": "This effect is stronger in older patients."}).json()
        assert body["verdict"] == "NotAida"
        assert body["violations"] == ["NotIndependent"]

    def test_validate_perfect(self, client, malaria):
        body = client.post("/validate", json={"text": malaria.text}).json()
        assert body["verdict"] == "Perfect" and body["violations"] == []

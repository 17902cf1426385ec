// Client-side assembly of a sentence nanopublication as TriG, for the
// compose view. The structure matches what the portal stores: a head graph
// linking publication, assertion, and provenance; an (empty) assertion
// graph whose head carries the sentence URI; and a provenance graph naming
// the composing user, time, channel, and chosen certainty level.

import { encodeSentence } from "./aida.js";

const NP = "http://www.nanopub.org/nschema#";
const NPX = "http://purl.org/nanopub/x/";
const PROV = "http://www.w3.org/ns/prov#";
const XSD = "http://www.w3.org/2001/XMLSchema#";

export type Certainty = "Hypothesized" | "Probable" | "Established";

export interface ComposedNanopub {
  uri: string;
  sentenceUri: string;
  trig: string;
}

export function buildSentenceNanopub(
  sentenceText: string,
  agentIri: string,
  certainty: Certainty,
  now: Date = new Date(),
): ComposedNanopub {
  const sentenceUri = encodeSentence(sentenceText);
  const stem = `urn:uuid:${crypto.randomUUID()}`;
  const assertion = `${stem}.Assertion`;
  const lines = [
    `@prefix np: <${NP}> .`,
    `@prefix npx: <${NPX}> .`,
    `@prefix aida: <http://purl.org/aida/> .`,
    `@prefix rdf: <http://www.w3.org/1999/02/22-rdf-syntax-ns#> .`,
    `@prefix xsd: <${XSD}> .`,
    ``,
    `<${stem}.Head> {`,
    `    <${stem}> np:hasAssertion <${assertion}> .`,
    `    <${stem}> np:hasProvenance <${stem}.Provenance> .`,
    `    <${assertion}> np:containsGraph <${assertion}.Head> .`,
    `}`,
    ``,
    `<${assertion}> {`,
    `}`,
    ``,
    `<${assertion}.Head> {`,
    `    <${assertion}> npx:asSentence <${sentenceUri}> .`,
    `}`,
    ``,
    `<${stem}.Provenance> {`,
    `    <${assertion}> <${PROV}wasAttributedTo> <${agentIri}> .`,
    `    <${assertion}> <${PROV}generatedAtTime> "${now.toISOString()}"^^xsd:dateTime .`,
    `    <${assertion}> npx:createdByChannel npx:AuthorChannel .`,
    `    <${assertion}> npx:hasCertaintyLevel npx:${certainty} .`,
    `}`,
    ``,
  ];
  return { uri: stem, sentenceUri, trig: lines.join("\n") };
}

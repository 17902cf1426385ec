// Typed client for the portal HTTP+JSON API. The fetch implementation is
// injectable so tests can run against a fixture server.

export interface ProvenanceSummary {
  attributed_to?: string;
  generated_at?: string;
  derived_from?: string[];
  channel?: string;
  certainty?: string;
}

export interface AssertingNanopub {
  nanopub_uri: string;
  provenance: ProvenanceSummary;
}

export interface RelatedLink {
  other: string;
  relation: string;
  nanopub_uri: string;
  human_asserted: boolean;
}

export interface OpinionView {
  agent: string;
  statement: string;
  kind: string;
  nanopub_uri: string;
  at: string;
}

export interface StatementView {
  sentence: string;
  uri: string;
  asserting_nanopubs: AssertingNanopub[];
  related: RelatedLink[];
  opinions: OpinionView[];
}

export interface ValidationReport {
  verdict: "Perfect" | "MinorIssue" | "NotAida" | "Inaccurate";
  violations: string[];
  minor_issues: string[];
  matched_rules: string[];
}

export interface Receipt {
  uri: string;
  stored_at: string;
}

export interface AgentInfo {
  iri: string;
  display_name: string;
  kind: string;
}

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(public status: number, public detail: string) {
    super(`API error ${status}: ${detail}`);
  }
}

export class PortalApi {
  private fetchImpl: FetchLike;

  constructor(private baseUrl: string, fetchImpl?: FetchLike) {
    this.fetchImpl = fetchImpl ?? ((input, init) => fetch(input, init));
  }

  private async request(path: string, init?: RequestInit): Promise<Response> {
    const response = await this.fetchImpl(this.baseUrl + path, init);
    if (!response.ok) {
      let detail = response.statusText;
      try {
        const body = await response.json();
        detail = body.detail ?? body.error ?? detail;
      } catch {
        // non-JSON error body; keep the status text
      }
      throw new ApiError(response.status, detail);
    }
    return response;
  }

  private async postJson(path: string, payload: unknown): Promise<Response> {
    return this.request(path, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(payload),
    });
  }

  async getStatement(uri: string): Promise<StatementView> {
    const response = await this.request("/statements/" + encodeURIComponent(uri));
    return response.json();
  }

  async postOpinion(agent: string, statement: string, kind: string): Promise<OpinionView> {
    const response = await this.postJson("/opinions", { agent, statement, kind });
    return response.json();
  }

  async postLink(agent: string, a: string, b: string, relation: string): Promise<Receipt> {
    const response = await this.postJson("/links", { agent, a, b, relation });
    return response.json();
  }

  async validateText(text: string): Promise<ValidationReport> {
    const response = await this.postJson("/validate", { text });
    return response.json();
  }

  async publishTrig(trig: string): Promise<{ receipts: Receipt[] }> {
    const response = await this.request("/nanopubs", {
      method: "POST",
      headers: { "Content-Type": "application/trig" },
      body: trig,
    });
    return response.json();
  }

  async fetchNanopubTrig(uri: string): Promise<string> {
    const response = await this.request("/nanopubs/" + encodeURIComponent(uri));
    return response.text();
  }

  async listAgents(): Promise<AgentInfo[]> {
    const response = await this.request("/agents");
    const body = await response.json();
    return body.agents;
  }

  async registerAgent(agent: AgentInfo): Promise<AgentInfo> {
    const response = await this.postJson("/agents", agent);
    return response.json();
  }

  async search(query: string, limit = 10): Promise<{ uri: string; score: number }[]> {
    const params = new URLSearchParams({ q: query, limit: String(limit) });
    const response = await this.request("/search?" + params.toString());
    const body = await response.json();
    return body.results;
  }
}

// Statement page: everything known about one sentence, with a provenance
// affordance on every item that opens the backing nanopublication's TriG.
// Opinions post optimistically and roll back on failure; bot-proposed
// related-meaning links can be confirmed as human same-meaning links with
// one click, or hidden locally.

import { PortalApi, StatementView, RelatedLink, OpinionView } from "./api.js";
import { decodeSentenceUri } from "./aida.js";

const OPINION_BUTTONS: { kind: string; label: string }[] = [
  { kind: "Agrees", label: "I agree" },
  { kind: "Disagrees", label: "I disagree" },
  { kind: "IsConvinced", label: "I am convinced" },
  { kind: "IsNotConvinced", label: "I am not convinced" },
];

export interface StatementPageOptions {
  agent: string | null;
  onNavigate?: (sentenceUri: string) => void;
}

export class StatementPage {
  private uri = "";
  private view: StatementView | null = null;
  private pendingOpinion: { agent: string; kind: string } | null = null;
  private hiddenProposals = new Set<string>();
  private error = "";

  constructor(
    private root: HTMLElement,
    private api: PortalApi,
    private options: StatementPageOptions,
  ) {}

  async show(uri: string): Promise<void> {
    this.uri = uri;
    try {
      this.view = await this.api.getStatement(uri);
      this.error = "";
    } catch (err) {
      this.view = null;
      this.error = String(err);
    }
    this.render();
  }

  async clickOpinion(kind: string): Promise<void> {
    const agent = this.options.agent;
    if (!agent) {
      this.error = "Select an agent before publishing an opinion.";
      this.render();
      return;
    }
    this.pendingOpinion = { agent, kind };
    this.render();
    try {
      await this.api.postOpinion(agent, this.uri, kind);
      this.pendingOpinion = null;
      await this.show(this.uri);
    } catch (err) {
      this.pendingOpinion = null;
      this.error = `Opinion was not published: ${err}`;
      this.render();
    }
  }

  async confirmRelation(other: string): Promise<void> {
    const agent = this.options.agent;
    if (!agent) {
      this.error = "Select an agent before confirming a relation.";
      this.render();
      return;
    }
    try {
      await this.api.postLink(agent, this.uri, other, "hasSameMeaning");
      await this.show(this.uri);
    } catch (err) {
      this.error = `Link was not published: ${err}`;
      this.render();
    }
  }

  rejectRelation(nanopubUri: string): void {
    this.hiddenProposals.add(nanopubUri);
    this.render();
  }

  private async showProvenance(nanopubUri: string): Promise<void> {
    const panel = this.root.querySelector<HTMLElement>(".provenance-panel");
    if (!panel) return;
    try {
      const trig = await this.api.fetchNanopubTrig(nanopubUri);
      panel.innerHTML = "";
      const heading = document.createElement("h3");
      heading.textContent = nanopubUri;
      const pre = document.createElement("pre");
      pre.className = "trig";
      pre.textContent = trig;
      panel.append(heading, pre);
    } catch (err) {
      panel.textContent = `Could not load ${nanopubUri}: ${err}`;
    }
  }

  private provenanceButton(nanopubUri: string): HTMLButtonElement {
    const button = document.createElement("button");
    button.className = "provenance";
    button.title = "Show the nanopublication that established this item";
    button.textContent = "provenance";
    button.addEventListener("click", () => void this.showProvenance(nanopubUri));
    return button;
  }

  private render(): void {
    this.root.innerHTML = "";
    const view = this.view;

    if (this.error) {
      const banner = document.createElement("div");
      banner.className = "error-banner";
      banner.textContent = this.error;
      this.root.append(banner);
    }
    if (!view) return;

    const title = document.createElement("h2");
    title.className = "sentence";
    title.textContent = view.sentence || decodeSentenceUri(this.uri);
    this.root.append(title);

    this.root.append(this.renderAssertions(view));
    this.root.append(this.renderRelated(view));
    this.root.append(this.renderOpinions(view));

    const panel = document.createElement("div");
    panel.className = "provenance-panel";
    this.root.append(panel);
  }

  private section(name: string, cssClass: string): [HTMLElement, HTMLUListElement] {
    const section = document.createElement("section");
    section.className = cssClass;
    const heading = document.createElement("h3");
    heading.textContent = name;
    const list = document.createElement("ul");
    section.append(heading, list);
    return [section, list];
  }

  private renderAssertions(view: StatementView): HTMLElement {
    const [section, list] = this.section("Asserted by", "assertions");
    if (view.asserting_nanopubs.length === 0) {
      const item = document.createElement("li");
      item.className = "empty-state";
      item.textContent = "Nobody has asserted this sentence yet. Be the first to assert it.";
      list.append(item);
    }
    for (const asserting of view.asserting_nanopubs) {
      const item = document.createElement("li");
      const prov = asserting.provenance;
      const label = document.createElement("span");
      label.textContent = `${prov.attributed_to ?? "unknown agent"} via ${prov.channel ?? "?"} at ${prov.generated_at ?? "?"}`;
      item.append(label, this.provenanceButton(asserting.nanopub_uri));
      list.append(item);
    }
    return section;
  }

  private renderRelated(view: StatementView): HTMLElement {
    const [section, list] = this.section("Related sentences", "related");
    const links = view.related.filter(
      (link) => link.human_asserted || !this.hiddenProposals.has(link.nanopub_uri),
    );
    for (const link of links) {
      list.append(this.renderLink(link));
    }
    return section;
  }

  private renderLink(link: RelatedLink): HTMLLIElement {
    const item = document.createElement("li");
    item.className = link.human_asserted ? "human-link" : "bot-proposal";
    const text = document.createElement("a");
    text.href = "#";
    try {
      text.textContent = decodeSentenceUri(link.other);
    } catch {
      text.textContent = link.other;
    }
    text.addEventListener("click", (event) => {
      event.preventDefault();
      this.options.onNavigate?.(link.other);
    });
    const relation = document.createElement("em");
    relation.textContent = link.human_asserted ? link.relation : `${link.relation} (proposed)`;
    item.append(text, relation, this.provenanceButton(link.nanopub_uri));
    if (!link.human_asserted) {
      const confirm = document.createElement("button");
      confirm.className = "confirm-relation";
      confirm.textContent = "confirm same meaning";
      confirm.addEventListener("click", () => void this.confirmRelation(link.other));
      const reject = document.createElement("button");
      reject.className = "reject-relation";
      reject.textContent = "hide";
      reject.addEventListener("click", () => this.rejectRelation(link.nanopub_uri));
      item.append(confirm, reject);
    }
    return item;
  }

  private renderOpinions(view: StatementView): HTMLElement {
    const [section, list] = this.section("Opinions", "opinions");
    const opinions: (OpinionView | { agent: string; kind: string; pending: true })[] = [
      ...view.opinions.filter(
        (o) => !(this.pendingOpinion && o.agent === this.pendingOpinion.agent),
      ),
    ];
    if (this.pendingOpinion) {
      opinions.push({ ...this.pendingOpinion, pending: true });
    }
    for (const opinion of opinions) {
      const item = document.createElement("li");
      item.className = "pending" in opinion ? "opinion pending" : "opinion";
      const label = document.createElement("span");
      label.textContent = `${opinion.agent}: ${opinion.kind}`;
      item.append(label);
      if (!("pending" in opinion)) {
        item.append(this.provenanceButton(opinion.nanopub_uri));
      }
      list.append(item);
    }
    const buttons = document.createElement("div");
    buttons.className = "opinion-buttons";
    for (const { kind, label } of OPINION_BUTTONS) {
      const button = document.createElement("button");
      button.dataset.kind = kind;
      button.textContent = label;
      button.addEventListener("click", () => void this.clickOpinion(kind));
      buttons.append(button);
    }
    section.append(buttons);
    return section;
  }
}

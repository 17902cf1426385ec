// Compose view: a sentence editor with live compliance feedback. Every
// keystroke (debounced) asks the portal to validate; the four criteria render
// as pass/fail rows. Certainty is not written into the sentence; it is chosen
// on a radio group and recorded in the publication's provenance. Publishing
// is blocked while the verdict is NotAida.

import { PortalApi, ValidationReport } from "./api.js";
import { buildSentenceNanopub, Certainty } from "./trig.js";

const CRITERIA = ["NotAtomic", "NotIndependent", "NotDeclarative", "NotAbsolute"] as const;

const CRITERION_LABELS: Record<string, string> = {
  NotAtomic: "Atomic: one indivisible claim",
  NotIndependent: "Independent: no external references",
  NotDeclarative: "Declarative: a complete sentence ending with a full stop",
  NotAbsolute: "Absolute: no certainty or discovery framing in the text",
};

export interface ComposeViewOptions {
  agent: string | null;
  debounceMs?: number;
  onPublished?: (sentenceUri: string) => void;
}

export class ComposeView {
  private report: ValidationReport | null = null;
  private timer: ReturnType<typeof setTimeout> | null = null;
  private error = "";

  readonly textarea: HTMLTextAreaElement;
  readonly publishButton: HTMLButtonElement;
  private feedback: HTMLElement;
  private radios: HTMLInputElement[] = [];

  constructor(
    root: HTMLElement,
    private api: PortalApi,
    private options: ComposeViewOptions,
  ) {
    root.innerHTML = "";
    const heading = document.createElement("h2");
    heading.textContent = "Compose a new sentence";

    this.textarea = document.createElement("textarea");
    this.textarea.placeholder = "Malaria is transmitted by mosquitoes.";
    this.textarea.addEventListener("input", () => this.scheduleValidation());

    this.feedback = document.createElement("div");
    this.feedback.className = "validation-feedback";

    const certainty = document.createElement("fieldset");
    certainty.className = "certainty";
    const legend = document.createElement("legend");
    legend.textContent = "How certain is this statement?";
    certainty.append(legend);
    const labels: [Certainty, string][] = [
      ["Hypothesized", "We hypothesize that this statement might be true"],
      ["Probable", "We think this statement is probably true"],
      ["Established", "We think this statement is an established fact"],
    ];
    for (const [value, label] of labels) {
      const wrapper = document.createElement("label");
      const radio = document.createElement("input");
      radio.type = "radio";
      radio.name = "certainty";
      radio.value = value;
      radio.checked = value === "Probable";
      this.radios.push(radio);
      wrapper.append(radio, document.createTextNode(" " + label));
      certainty.append(wrapper);
    }

    this.publishButton = document.createElement("button");
    this.publishButton.className = "publish";
    this.publishButton.textContent = "Publish";
    this.publishButton.disabled = true;
    this.publishButton.addEventListener("click", () => void this.publish());

    root.append(heading, this.textarea, this.feedback, certainty, this.publishButton);
  }

  private scheduleValidation(): void {
    if (this.timer !== null) {
      clearTimeout(this.timer);
    }
    this.timer = setTimeout(() => void this.validateNow(), this.options.debounceMs ?? 300);
  }

  async validateNow(): Promise<void> {
    const text = this.textarea.value;
    if (!text.trim()) {
      this.report = null;
      this.renderFeedback();
      return;
    }
    try {
      this.report = await this.api.validateText(text);
      this.error = "";
    } catch (err) {
      this.report = null;
      this.error = String(err);
    }
    this.renderFeedback();
  }

  get certainty(): Certainty {
    const checked = this.radios.find((radio) => radio.checked);
    return (checked?.value ?? "Probable") as Certainty;
  }

  private canPublish(): boolean {
    return (
      this.report !== null &&
      (this.report.verdict === "Perfect" || this.report.verdict === "MinorIssue") &&
      this.options.agent !== null
    );
  }

  async publish(): Promise<void> {
    if (!this.canPublish() || !this.options.agent) return;
    const composed = buildSentenceNanopub(this.textarea.value.trim(), this.options.agent, this.certainty);
    try {
      await this.api.publishTrig(composed.trig);
      this.options.onPublished?.(composed.sentenceUri);
    } catch (err) {
      this.error = `Publishing failed: ${err}`;
      this.renderFeedback();
    }
  }

  private renderFeedback(): void {
    this.feedback.innerHTML = "";
    if (this.error) {
      const banner = document.createElement("div");
      banner.className = "error-banner";
      banner.textContent = this.error;
      this.feedback.append(banner);
    }
    const report = this.report;
    this.publishButton.disabled = !this.canPublish();
    if (!report) return;

    const verdict = document.createElement("p");
    verdict.className = `verdict verdict-${report.verdict.toLowerCase()}`;
    verdict.textContent = `Verdict: ${report.verdict}`;
    this.feedback.append(verdict);

    const list = document.createElement("ul");
    list.className = "criteria";
    for (const criterion of CRITERIA) {
      const item = document.createElement("li");
      const violated = report.violations.includes(criterion);
      item.className = violated ? `criterion failed ${criterion}` : `criterion ok ${criterion}`;
      item.textContent = (violated ? "✗ " : "✓ ") + CRITERION_LABELS[criterion];
      if (violated && criterion === "NotAbsolute") {
        const hint = document.createElement("small");
        hint.className = "certainty-hint";
        hint.textContent =
          " — state the claim itself and record the uncertainty with the certainty options below";
        item.append(hint);
      }
      list.append(item);
    }
    this.feedback.append(list);

    if (report.minor_issues.length > 0) {
      const minors = document.createElement("p");
      minors.className = "minor-issues";
      minors.textContent = "Minor issues: " + report.minor_issues.join("; ");
      this.feedback.append(minors);
    }
  }
}

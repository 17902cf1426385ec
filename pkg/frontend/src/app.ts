// Hash-routed single page: #/statement/<percent-encoded sentence URI> shows a
// statement page, #/compose the sentence editor. Agent identity is a plain
// selection over the portal's registry.

import { PortalApi } from "./api.js";
import { StatementPage } from "./statementPage.js";
import { ComposeView } from "./composeView.js";
import { encodeSentence } from "./aida.js";

export function startApp(root: HTMLElement, baseUrl: string): void {
  const api = new PortalApi(baseUrl);
  const state: { agent: string | null } = { agent: null };

  const nav = document.createElement("nav");
  const composeLink = document.createElement("a");
  composeLink.href = "#/compose";
  composeLink.textContent = "Compose";
  const searchForm = document.createElement("form");
  const searchInput = document.createElement("input");
  searchInput.placeholder = "Search sentences or paste a sentence";
  const searchButton = document.createElement("button");
  searchButton.textContent = "Go";
  searchForm.append(searchInput, searchButton);
  const agentSelect = document.createElement("select");
  agentSelect.className = "agent-select";
  nav.append(composeLink, searchForm, agentSelect);

  const main = document.createElement("main");
  root.innerHTML = "";
  root.append(nav, main);

  void api.listAgents().then((agents) => {
    agentSelect.innerHTML = "<option value=''>(choose agent)</option>";
    for (const agent of agents) {
      const option = document.createElement("option");
      option.value = agent.iri;
      option.textContent = agent.display_name;
      agentSelect.append(option);
    }
  });
  agentSelect.addEventListener("change", () => {
    state.agent = agentSelect.value || null;
  });

  searchForm.addEventListener("submit", (event) => {
    event.preventDefault();
    const query = searchInput.value.trim();
    if (!query) return;
    if (query.endsWith(".") && query.includes(" ")) {
      location.hash = "#/statement/" + encodeURIComponent(encodeSentence(query));
      return;
    }
    void api.search(query).then((results) => {
      if (results.length > 0) {
        location.hash = "#/statement/" + encodeURIComponent(results[0].uri);
      }
    });
  });

  const route = () => {
    const hash = location.hash || "#/compose";
    if (hash.startsWith("#/statement/")) {
      const uri = decodeURIComponent(hash.slice("#/statement/".length));
      const page = new StatementPage(main, api, {
        // read through to the live selection, not a route-time snapshot
        get agent() {
          return state.agent;
        },
        onNavigate: (next) => {
          location.hash = "#/statement/" + encodeURIComponent(next);
        },
      });
      void page.show(uri);
    } else {
      new ComposeView(main, api, {
        get agent() {
          return state.agent;
        },
        onPublished: (sentenceUri) => {
          location.hash = "#/statement/" + encodeURIComponent(sentenceUri);
        },
      });
    }
  };

  window.addEventListener("hashchange", route);
  route();
}

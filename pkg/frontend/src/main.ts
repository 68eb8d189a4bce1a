// Browser glue: a small hash router over the pure view modules.
//   #/            submit form (basic/advanced)
//   #/submit/advanced/:accession   advanced form pre-filled (re-run action)
//   #/status/:token                poll + render results
//   #/proteome/:runId              filterable results table + stats panel

import { ApiException, DaisyClient, TaxonomyPayload } from "./api.js";
import { StatusPoller } from "./poller.js";
import {
  ProteomeTableState,
  initialTableState,
  queryFor,
  renderProteomeTable,
  renderStatsPanel,
  setFilter,
  toggleSort,
} from "./proteomeView.js";
import {
  renderNotFound,
  renderResult,
  renderStatusLine,
  renderToken,
  escapeHtml,
} from "./requestView.js";
import {
  SubmitFormState,
  applyApiError,
  canSubmit,
  emptyForm,
  payloadFor,
  prefillAdvanced,
  setField,
  setMode,
  toggleSubclass,
} from "./submitForm.js";

const client = new DaisyClient("");
const app = () => document.getElementById("app")!;

let taxonomy: TaxonomyPayload | null = null;
let form: SubmitFormState = emptyForm();
let tableState: ProteomeTableState = initialTableState();
let poller: StatusPoller | null = null;

async function ensureTaxonomy(): Promise<TaxonomyPayload> {
  if (!taxonomy) taxonomy = await client.getTaxonomy();
  return taxonomy;
}

function fieldError(name: "accession" | "email" | "subclasses"): string {
  const message = form.fieldErrors[name];
  return message ? `<p class="field-error">${escapeHtml(message)}</p>` : "";
}

function renderSubmitForm(tax: TaxonomyPayload): void {
  const advanced = form.mode === "ADVANCED";
  const subclassBoxes = tax.classes
    .map(
      (cls) => `
      <fieldset><legend>${escapeHtml(cls.name)}</legend>
        ${cls.subclasses
          .map(
            (s) => `
          <label><input type="checkbox" data-subclass="${s.id}"
            ${form.selectedSubclasses.includes(s.id) ? "checked" : ""}/> ${s.id} ${escapeHtml(s.name)}</label>`,
          )
          .join("")}
      </fieldset>`,
    )
    .join("");
  app().innerHTML = `
    <h1>Submit a curation request</h1>
    <form id="submit-form">
      <label>Accession (PDB id or UniProt accession)
        <input name="accession" value="${escapeHtml(form.accession)}"/>
      </label>${fieldError("accession")}
      <label>Email
        <input name="email" value="${escapeHtml(form.email)}"/>
      </label>${fieldError("email")}
      <label><input type="radio" name="mode" value="BASIC" ${advanced ? "" : "checked"}/> Basic</label>
      <label><input type="radio" name="mode" value="ADVANCED" ${advanced ? "checked" : ""}/> Advanced</label>
      <div id="subclass-picker" ${advanced ? "" : "hidden"}>${subclassBoxes}</div>
      ${fieldError("subclasses")}
      <button type="submit" id="submit-btn" ${canSubmit(form) ? "" : "disabled"}>Submit</button>
    </form>
    <p><a href="#/proteome">Proteome runs</a></p>`;

  const formEl = document.getElementById("submit-form") as HTMLFormElement;
  formEl.querySelectorAll("input[name=accession], input[name=email]").forEach((el) =>
    el.addEventListener("input", (ev) => {
      const input = ev.target as HTMLInputElement;
      form = setField(form, input.name as "accession" | "email", input.value);
      (document.getElementById("submit-btn") as HTMLButtonElement).disabled = !canSubmit(form);
    }),
  );
  formEl.querySelectorAll("input[name=mode]").forEach((el) =>
    el.addEventListener("change", (ev) => {
      form = setMode(form, (ev.target as HTMLInputElement).value as "BASIC" | "ADVANCED");
      renderSubmitForm(tax);
    }),
  );
  formEl.querySelectorAll("input[data-subclass]").forEach((el) =>
    el.addEventListener("change", (ev) => {
      form = toggleSubclass(form, (ev.target as HTMLInputElement).dataset.subclass!);
      (document.getElementById("submit-btn") as HTMLButtonElement).disabled = !canSubmit(form);
    }),
  );
  formEl.addEventListener("submit", async (ev) => {
    ev.preventDefault();
    if (!canSubmit(form)) return;
    try {
      const { id } = await client.submitRequest(payloadFor(form));
      window.location.hash = `#/status/${id}`;
    } catch (err) {
      if (err instanceof ApiException) {
        form = applyApiError(form, err.body);
        renderSubmitForm(tax);
      } else {
        throw err;
      }
    }
  });
}

async function showStatus(token: string): Promise<void> {
  poller?.stop();
  poller = new StatusPoller(async () => {
    let payload;
    try {
      payload = await client.getRequest(token);
    } catch (err) {
      if (err instanceof ApiException && err.status === 404) {
        app().innerHTML = renderNotFound(token);
        return true;
      }
      throw err;
    }
    const terminal = payload.status === "DONE" || payload.status === "FAILED";
    let body = renderToken(token) + renderStatusLine(payload);
    if (payload.status === "DONE" && payload.result) {
      const alignments: Record<string, string> = {};
      for (const chain of Object.values(payload.result.chains)) {
        for (const region of chain.regions) {
          alignments[region.directory] = await client.fetchOutputText(
            token,
            `${region.directory}/alignment.txt`,
          );
        }
      }
      body += renderResult(payload, alignments);
      if (payload.run_id) {
        body += `<p><a href="#/proteome/${payload.run_id}">Proteome results table</a></p>`;
      }
    }
    app().innerHTML = body;
    document.querySelectorAll("button[data-copy]").forEach((el) =>
      el.addEventListener("click", () =>
        navigator.clipboard.writeText((el as HTMLElement).dataset.copy!),
      ),
    );
    return terminal;
  }, 3000);
  poller.start();
}

async function showProteome(runId: string): Promise<void> {
  let resultsHtml = "";
  let statsHtml = "";
  try {
    const [results, stats] = await Promise.all([
      client.getProteomeResults(runId, queryFor(tableState)),
      client.getProteomeStats(runId),
    ]);
    resultsHtml = renderProteomeTable(results.entries);
    statsHtml = renderStatsPanel(results.proteome_id, stats.stats);
  } catch (err) {
    if (err instanceof ApiException && (err.status === 404 || err.status === 503)) {
      app().innerHTML = `<div class="not-found">${escapeHtml(err.body.message)}</div>`;
      return;
    }
    throw err;
  }
  const f = tableState.filters;
  app().innerHTML = `
    <h1>Proteome run ${escapeHtml(runId)}</h1>
    <div class="filters">
      <select id="f-db">
        <option value="">any database</option>
        <option value="PDB" ${f.db === "PDB" ? "selected" : ""}>PDB</option>
        <option value="ALPHAFOLD" ${f.db === "ALPHAFOLD" ? "selected" : ""}>AlphaFold</option>
      </select>
      <select id="f-trr">
        <option value="">with or without TRR</option>
        <option value="true" ${f.has_trr === true ? "selected" : ""}>with TRR</option>
        <option value="false" ${f.has_trr === false ? "selected" : ""}>without TRR</option>
      </select>
      <input id="f-component" placeholder="component" value="${escapeHtml(f.component ?? "")}"/>
    </div>
    ${resultsHtml}
    ${statsHtml}`;

  document.getElementById("f-db")!.addEventListener("change", (ev) => {
    const v = (ev.target as HTMLSelectElement).value;
    tableState = setFilter(tableState, "db", v === "" ? undefined : (v as "PDB" | "ALPHAFOLD"));
    void showProteome(runId);
  });
  document.getElementById("f-trr")!.addEventListener("change", (ev) => {
    const v = (ev.target as HTMLSelectElement).value;
    tableState = setFilter(tableState, "has_trr", v === "" ? undefined : v === "true");
    void showProteome(runId);
  });
  document.getElementById("f-component")!.addEventListener("change", (ev) => {
    tableState = setFilter(tableState, "component", (ev.target as HTMLInputElement).value);
    void showProteome(runId);
  });
  document.querySelectorAll("th[data-sort]").forEach((el) =>
    el.addEventListener("click", () => {
      tableState = toggleSort(tableState, (el as HTMLElement).dataset.sort as never);
      void showProteome(runId);
    }),
  );
}

function renderProteomeLanding(): void {
  app().innerHTML = `
    <h1>Proteome run</h1>
    <form id="proteome-form">
      <label>Proteome id <input name="proteome" placeholder="UP000000625"/></label>
      <label>Email <input name="email"/></label>
      <button type="submit">Start run</button>
    </form>
    <form id="open-run">
      <label>Or open an existing run <input name="run"/></label>
      <button type="submit">Open</button>
    </form>`;
  document.getElementById("proteome-form")!.addEventListener("submit", async (ev) => {
    ev.preventDefault();
    const data = new FormData(ev.target as HTMLFormElement);
    const { run_id } = await client.submitProteome(
      String(data.get("proteome")),
      String(data.get("email") || "batch@local"),
    );
    window.location.hash = `#/status/${run_id}`;
  });
  document.getElementById("open-run")!.addEventListener("submit", (ev) => {
    ev.preventDefault();
    const data = new FormData(ev.target as HTMLFormElement);
    window.location.hash = `#/proteome/${String(data.get("run"))}`;
  });
}

async function route(): Promise<void> {
  poller?.stop();
  const hash = window.location.hash || "#/";
  const parts = hash.slice(2).split("/").filter(Boolean);
  if (parts.length === 0) {
    form = emptyForm();
    renderSubmitForm(await ensureTaxonomy());
  } else if (parts[0] === "submit" && parts[1] === "advanced" && parts[2]) {
    form = prefillAdvanced(decodeURIComponent(parts[2]));
    renderSubmitForm(await ensureTaxonomy());
  } else if (parts[0] === "status" && parts[1]) {
    await showStatus(parts[1]);
  } else if (parts[0] === "proteome" && parts[1]) {
    tableState = initialTableState();
    await showProteome(parts[1]);
  } else if (parts[0] === "proteome") {
    renderProteomeLanding();
  } else {
    app().innerHTML = `<div class="not-found">Unknown page.</div>`;
  }
}

window.addEventListener("hashchange", () => void route());
window.addEventListener("DOMContentLoaded", () => void route());

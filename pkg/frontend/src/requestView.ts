// Status and result rendering. All functions are pure string -> HTML
// renderers over API payloads; every number shown comes straight from the
// payload (no client-side recomputation).

import type { ChainReport, Region, RequestPayload } from "./api.js";

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function outputHref(token: string, path: string): string {
  return `/api/requests/${encodeURIComponent(token)}/outputs/${path}`;
}

export function renderToken(token: string): string {
  return `
    <div class="token-banner">
      <span>Request number</span>
      <code class="token" data-token="${escapeHtml(token)}">${escapeHtml(token)}</code>
      <button type="button" class="copy-token" data-copy="${escapeHtml(token)}">copy</button>
      <p class="hint">Keep this number: it retrieves the outputs when processing finishes.</p>
    </div>`;
}

export function renderStatusLine(payload: RequestPayload): string {
  const badge = `<span class="status status-${payload.status.toLowerCase()}">${payload.status}</span>`;
  const error =
    payload.status === "FAILED" && payload.error
      ? `<p class="error">${escapeHtml(payload.error)}</p>`
      : "";
  return `
    <div class="status-line">
      <code>${escapeHtml(payload.accession)}</code> (${escapeHtml(payload.mode)}) ${badge}
      ${error}
    </div>`;
}

export function renderRegionCard(
  token: string,
  region: Region,
  alignmentText?: string,
): string {
  const links = region.files
    .map(
      (name) =>
        `<a class="download" href="${outputHref(token, `${region.directory}/${name}`)}">${escapeHtml(name)}</a>`,
    )
    .join("\n      ");
  const alignment = alignmentText
    ? `<pre class="alignment">${escapeHtml(alignmentText)}</pre>`
    : "";
  const units = region.units
    .map(
      (u) =>
        `<tr><td>${u.index}</td><td>${u.start}</td><td>${u.end}</td>` +
        `<td>${escapeHtml(u.template_id)}</td><td>${u.rmsd.toFixed(3)}</td></tr>`,
    )
    .join("");
  return `
    <section class="region-card">
      <h3>Region (${escapeHtml(region.chain_id)}) &mdash; subclass ${escapeHtml(region.classification)}</h3>
      <dl>
        <dt>Units</dt><dd>${region.unit_count}</dd>
        <dt>Average RMSD</dt><dd>${region.average_rmsd.toFixed(3)} &Aring;</dd>
        <dt>Relaxation level</dt><dd>${region.relaxation_level}</dd>
        <dt>Rule satisfied</dt><dd>${escapeHtml(region.rule_satisfied)}</dd>
      </dl>
      <table class="units">
        <thead><tr><th>#</th><th>start</th><th>end</th><th>template</th><th>RMSD</th></tr></thead>
        <tbody>${units}</tbody>
      </table>
      ${alignment}
      <div class="downloads">
      ${links}
      </div>
    </section>`;
}

export function renderCandidates(chain: ChainReport): string {
  if (chain.candidates.length === 0) {
    return `<p class="candidates-empty">No family-based classification prediction for this chain.</p>`;
  }
  const rows = chain.candidates
    .map(
      (c) =>
        `<tr><td>${escapeHtml(c.subclass)}</td><td>${c.score.toFixed(3)}</td></tr>`,
    )
    .join("");
  const fallback = chain.used_fallback
    ? `<p class="hint">Known repeat family without subclass: all classifications considered.</p>`
    : "";
  return `
    <table class="candidates">
      <thead><tr><th>subclass</th><th>score</th></tr></thead>
      <tbody>${rows}</tbody>
    </table>${fallback}`;
}

// A finished request without regions is an ordinary outcome, never an error.
export function renderNoRegions(): string {
  return `<p class="no-regions">No repeat regions identified. This does not rule out
    tandem repeats in this structure.</p>`;
}

export function renderChainSection(
  token: string,
  chain: ChainReport,
  alignments: Record<string, string> = {},
): string {
  const regions =
    chain.regions.length === 0
      ? renderNoRegions()
      : chain.regions
          .map((r) => renderRegionCard(token, r, alignments[r.directory]))
          .join("\n");
  return `
    <section class="chain" data-chain="${escapeHtml(chain.chain_id)}">
      <h2>Chain ${escapeHtml(chain.chain_id)}</h2>
      ${renderCandidates(chain)}
      ${regions}
    </section>`;
}

export function renderResult(payload: RequestPayload, alignments: Record<string, string> = {}): string {
  if (!payload.result) return "";
  const structureLink = `<a class="download" href="${outputHref(payload.id, payload.result.structure_file)}">structure.pdb</a>`;
  const chains = Object.values(payload.result.chains)
    .map((chain) => renderChainSection(payload.id, chain, alignments))
    .join("\n");
  const rerun = `<a class="re-run" href="#/submit/advanced/${encodeURIComponent(payload.accession)}">Re-run with different subclasses</a>`;
  return `<div class="result">${structureLink}\n${chains}\n${rerun}</div>`;
}

export function renderNotFound(token: string): string {
  return `<div class="not-found">No request found for <code>${escapeHtml(token)}</code>.
    Check the request number and try again.</div>`;
}

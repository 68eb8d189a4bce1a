// Proteome results table + stats panel. The table rows always equal the API
// response for the current filter/sort state; sorting and filtering are
// delegated to the server through query parameters.

import type { ProteomeEntry, ProteomeQuery, ProteomeStats } from "./api.js";
import { escapeHtml } from "./requestView.js";

export type SortColumn = "exec_seconds" | "component" | "db";

export interface ProteomeTableState {
  filters: {
    db?: "PDB" | "ALPHAFOLD";
    has_trr?: boolean;
    component?: string;
  };
  orderBy?: SortColumn;
  direction: "asc" | "desc";
}

export function initialTableState(): ProteomeTableState {
  return { filters: {}, direction: "asc" };
}

export function queryFor(state: ProteomeTableState): ProteomeQuery {
  return {
    ...state.filters,
    order_by: state.orderBy,
    dir: state.orderBy ? state.direction : undefined,
  };
}

export function toggleSort(state: ProteomeTableState, column: SortColumn): ProteomeTableState {
  if (state.orderBy === column) {
    return { ...state, direction: state.direction === "asc" ? "desc" : "asc" };
  }
  return { ...state, orderBy: column, direction: "asc" };
}

export function setFilter(
  state: ProteomeTableState,
  name: keyof ProteomeTableState["filters"],
  value: ProteomeTableState["filters"][keyof ProteomeTableState["filters"]],
): ProteomeTableState {
  const filters = { ...state.filters };
  if (value === undefined || value === "") {
    delete filters[name];
  } else {
    (filters as Record<string, unknown>)[name] = value;
  }
  return { ...state, filters };
}

export function renderProteomeTable(entries: ProteomeEntry[]): string {
  const rows = entries
    .map((e) => {
      const status = e.error
        ? `<span class="status status-failed" title="${escapeHtml(e.error)}">failed</span>`
        : e.has_trr
          ? `<span class="status status-trr">TRR &times; ${e.region_count}</span>`
          : `<span class="status status-none">none</span>`;
      return (
        `<tr data-accession="${escapeHtml(e.accession)}">` +
        `<td>${escapeHtml(e.accession)}</td>` +
        `<td>${escapeHtml(e.component)}</td>` +
        `<td>${escapeHtml(e.source)}</td>` +
        `<td>${status}</td>` +
        `<td class="num">${e.exec_seconds.toFixed(2)}</td></tr>`
      );
    })
    .join("");
  return `
    <table class="proteome">
      <thead>
        <tr>
          <th>accession</th>
          <th data-sort="component">component</th>
          <th data-sort="db">database</th>
          <th>repeat regions</th>
          <th data-sort="exec_seconds">execution (s)</th>
        </tr>
      </thead>
      <tbody>${rows}</tbody>
    </table>`;
}

const STATS_LABELS: [string, keyof ProteomeStats, "int" | "s" | "pct"][] = [
  ["Processed structures", "processed_total", "int"],
  ["Processed structures (PDB)", "processed_pdb", "int"],
  ["Processed structures (AlphaFold)", "processed_alphafold", "int"],
  ["APT (seconds)", "apt_all", "s"],
  ["Structures with TRR", "structures_with_trr", "int"],
  ["APT for structures with TDRR (seconds)", "apt_with_trr", "s"],
  ["APT for structures without TDRR (seconds)", "apt_without_trr", "s"],
  ["APT for PDB structures with TDRR (seconds)", "apt_pdb_trr", "s"],
  ["APT for AlphaFold structures with TDRR (seconds)", "apt_af_trr", "s"],
  ["Average number of regions for structures with TDRR", "avg_regions_per_trr_structure", "s"],
  ["APT for each TDRR (seconds)", "apt_per_region", "s"],
  ["PDB share (%)", "pdb_share_pct", "pct"],
  ["AlphaFold share (%)", "alphafold_share_pct", "pct"],
];

export function renderStatsPanel(proteomeId: string, stats: ProteomeStats | null): string {
  if (!stats) {
    return `<div class="stats-panel">No processed entries for ${escapeHtml(proteomeId)}.</div>`;
  }
  const rows = STATS_LABELS.map(([label, key, kind]) => {
    const value = stats[key];
    const shown = kind === "int" ? String(value) : value.toFixed(2);
    return `<tr><td>${escapeHtml(label)}</td><td class="num">${shown}</td></tr>`;
  }).join("");
  return `
    <div class="stats-panel">
      <h3>Proteome ${escapeHtml(proteomeId)}</h3>
      <table class="stats"><tbody>${rows}</tbody></table>
    </div>`;
}

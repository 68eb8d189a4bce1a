import { describe, expect, it } from "vitest";

import { buildResultsQuery } from "../src/api.js";
import {
  initialTableState,
  queryFor,
  renderProteomeTable,
  renderStatsPanel,
  setFilter,
  toggleSort,
} from "../src/proteomeView.js";
import { PROTEOME_RESULTS, PROTEOME_STATS } from "./fixtures.js";

describe("proteome table", () => {
  it("renders exactly the fixture entries, one row each", () => {
    const html = renderProteomeTable(PROTEOME_RESULTS.entries);
    expect(PROTEOME_RESULTS.entries).toHaveLength(5);
    const rows = html.match(/<tr data-accession=/g) ?? [];
    expect(rows).toHaveLength(5);
    for (const entry of PROTEOME_RESULTS.entries) {
      expect(html).toContain(entry.accession);
      expect(html).toContain(entry.component);
      expect(html).toContain(entry.exec_seconds.toFixed(2));
    }
  });

  it("marks repeat-region presence from the payload only", () => {
    const html = renderProteomeTable(PROTEOME_RESULTS.entries);
    const withTrr = PROTEOME_RESULTS.entries.filter((e) => e.has_trr);
    const trrBadges = html.match(/status-trr/g) ?? [];
    expect(trrBadges).toHaveLength(withTrr.length);
  });

  it("sortable columns are the documented query axes", () => {
    const html = renderProteomeTable(PROTEOME_RESULTS.entries);
    expect(html).toContain('data-sort="exec_seconds"');
    expect(html).toContain('data-sort="component"');
    expect(html).toContain('data-sort="db"');
  });

  it("filter and sort state map onto the documented query parameters", () => {
    let state = initialTableState();
    state = setFilter(state, "db", "PDB");
    state = setFilter(state, "has_trr", true);
    state = setFilter(state, "component", "SOLA_FIX");
    state = toggleSort(state, "exec_seconds");
    state = toggleSort(state, "exec_seconds"); // flips to desc
    expect(buildResultsQuery(queryFor(state))).toBe(
      "?db=PDB&has_trr=true&component=SOLA_FIX&order_by=exec_seconds&dir=desc",
    );
  });

  it("clearing a filter removes its parameter", () => {
    let state = setFilter(initialTableState(), "db", "ALPHAFOLD");
    state = setFilter(state, "db", undefined);
    expect(buildResultsQuery(queryFor(state))).toBe("");
  });

  it("switching sort column resets direction to ascending", () => {
    let state = toggleSort(initialTableState(), "exec_seconds");
    state = toggleSort(state, "exec_seconds");
    expect(state.direction).toBe("desc");
    state = toggleSort(state, "component");
    expect(state).toMatchObject({ orderBy: "component", direction: "asc" });
  });
});

describe("stats panel", () => {
  const stats = PROTEOME_STATS.stats!;

  it("shows every stats field from the payload without recomputation", () => {
    const html = renderStatsPanel(PROTEOME_STATS.proteome_id, stats);
    expect(html).toContain(String(stats.processed_total));
    expect(html).toContain(stats.apt_all.toFixed(2));
    expect(html).toContain(stats.apt_with_trr.toFixed(2));
    expect(html).toContain(stats.apt_per_region.toFixed(2));
    expect(html).toContain(stats.pdb_share_pct.toFixed(2));
  });

  it("uses the published table row labels", () => {
    const html = renderStatsPanel(PROTEOME_STATS.proteome_id, stats);
    for (const label of [
      "Processed structures",
      "Processed structures (PDB)",
      "Processed structures (AlphaFold)",
      "APT (seconds)",
      "Structures with TRR",
      "APT for structures with TDRR (seconds)",
      "Average number of regions for structures with TDRR",
    ]) {
      expect(html).toContain(label);
    }
  });

  it("handles a run with no processed entries", () => {
    const html = renderStatsPanel("UP000000005", null);
    expect(html).toContain("No processed entries");
  });
});

/**
 * Traceability drawer: renders the server's trace report as clickable
 * tables. Rows carry the id of the element they point at; clicking one
 * hands that id to the focus callback so the owning perspective can
 * highlight it.
 */

import type { TraceReport } from "./types.js";

export type FocusHandler = (id: string) => void;

interface Section {
  heading: string;
  columns: string[];
  rows: { cells: string[]; target: string }[];
}

function sections(report: TraceReport): Section[] {
  const single = (heading: string, ids: string[]): Section => ({
    heading,
    columns: ["Element"],
    rows: ids.map((id) => ({ cells: [id], target: id })),
  });
  return [
    single("Unallocated functions", report.unallocatedFunctions),
    single("Unallocated features", report.unallocatedFeatures),
    single("Dangling trace links", report.danglingLinks),
    single("Orphan requirements", report.orphanRequirements),
    {
      heading: "Knowledge reuse",
      columns: ["Block", "Knowledge entry"],
      rows: report.knowledgeReuse.map((row) => ({
        cells: [row.block, row.entry],
        target: row.block,
      })),
    },
  ];
}

export function renderTraceView(report: TraceReport | null, onFocus: FocusHandler): HTMLElement {
  const drawer = document.createElement("footer");
  drawer.className = "trace-drawer";
  const heading = document.createElement("h2");
  heading.textContent = "Traceability";
  drawer.append(heading);

  if (report === null) {
    const placeholder = document.createElement("p");
    placeholder.className = "placeholder";
    placeholder.textContent = "no report yet";
    drawer.append(placeholder);
    return drawer;
  }

  const filled = sections(report).filter((section) => section.rows.length > 0);
  if (filled.length === 0) {
    const placeholder = document.createElement("p");
    placeholder.className = "placeholder";
    placeholder.textContent = "nothing to report";
    drawer.append(placeholder);
    return drawer;
  }

  for (const section of filled) {
    const container = document.createElement("div");
    container.className = "trace-section";
    const title = document.createElement("h3");
    title.textContent = `${section.heading} (${section.rows.length})`;
    container.append(title);

    const table = document.createElement("table");
    table.className = "grid";
    const head = document.createElement("tr");
    for (const column of section.columns) {
      const th = document.createElement("th");
      th.textContent = column;
      head.append(th);
    }
    table.append(head);
    for (const row of section.rows) {
      const tr = document.createElement("tr");
      tr.dataset.target = row.target;
      for (const cell of row.cells) {
        const td = document.createElement("td");
        td.textContent = cell;
        tr.append(td);
      }
      tr.addEventListener("click", () => onFocus(row.target));
      table.append(tr);
    }
    container.append(table);
    drawer.append(container);
  }
  return drawer;
}

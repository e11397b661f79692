// Renders a table document as an HTML table with nested row and column
// headers (colspan/rowspan computed from the sorted header paths).

import type { CellDoc, HeaderValue, TableDoc } from "./types.js";

function label(value: HeaderValue): string {
  return value === null ? "NULL" : String(value);
}

function pathKey(path: HeaderValue[]): string {
  return JSON.stringify(path);
}

/** Length of the run of paths sharing the first `depth + 1` values. */
function spanAt(paths: HeaderValue[][], start: number, depth: number): number {
  const prefix = pathKey(paths[start].slice(0, depth + 1));
  let end = start + 1;
  while (end < paths.length && pathKey(paths[end].slice(0, depth + 1)) === prefix) end++;
  return end - start;
}

export function renderGrid(doc: TableDoc): HTMLTableElement {
  const table = document.createElement("table");
  table.className = "pivot-grid";
  const rowDepth = Math.max(doc.axes.row.params.length, 1);
  const colDepth = Math.max(doc.axes.col.params.length, 1);
  const rowPaths = doc.headers.row;
  const colPaths = doc.headers.col;

  const cellIndex = new Map<string, CellDoc>();
  for (const cell of doc.cells) {
    cellIndex.set(pathKey(cell.rowPath) + "|" + pathKey(cell.colPath), cell);
  }
  const measureNames = doc.cells.length ? Object.keys(doc.cells[0].measures) : [];

  const head = table.createTHead();
  for (let depth = 0; depth < colDepth; depth++) {
    const tr = head.insertRow();
    if (depth === 0) {
      const corner = document.createElement("th");
      corner.colSpan = rowDepth;
      corner.rowSpan = colDepth;
      corner.textContent = `${doc.axes.row.dim}.${doc.axes.row.hierarchy} \\ ${doc.axes.col.dim}.${doc.axes.col.hierarchy}`;
      corner.className = "corner";
      tr.appendChild(corner);
    }
    for (let i = 0; i < colPaths.length; ) {
      const span = spanAt(colPaths, i, depth);
      const th = document.createElement("th");
      th.colSpan = span;
      th.textContent = label(colPaths[i][depth]);
      th.dataset.level = doc.axes.col.params[depth];
      tr.appendChild(th);
      i += span;
    }
  }

  const body = table.createTBody();
  if (!rowPaths.length) {
    const tr = body.insertRow();
    const td = tr.insertCell();
    td.colSpan = rowDepth + Math.max(colPaths.length, 1);
    td.className = "empty";
    td.textContent = "no contributing instances";
  }
  rowPaths.forEach((path, r) => {
    const tr = body.insertRow();
    for (let depth = 0; depth < rowDepth; depth++) {
      const firstOfSpan = r === 0 || pathKey(rowPaths[r - 1].slice(0, depth + 1)) !== pathKey(path.slice(0, depth + 1));
      if (!firstOfSpan) continue;
      const th = document.createElement("th");
      th.rowSpan = spanAt(rowPaths, r, depth);
      th.textContent = label(path[depth]);
      th.className = "row-header";
      tr.appendChild(th);
    }
    for (const colPath of colPaths) {
      const td = tr.insertCell();
      const cell = cellIndex.get(pathKey(path) + "|" + pathKey(colPath));
      if (cell) {
        td.textContent = "(" + measureNames.map((m) => cell.measures[m].display).join(", ") + ")";
        td.title = measureNames
          .map((m) => `${m}: ${cell.measures[m].display} over ${cell.measures[m].count} instance(s)`)
          .join("\n");
      } else {
        td.className = "absent";
      }
    }
  });

  const foot = table.createTFoot();
  for (const footer of doc.footers) {
    const tr = foot.insertRow();
    const td = tr.insertCell();
    td.colSpan = rowDepth + Math.max(colPaths.length, 1);
    td.className = "footer";
    td.textContent = footer;
  }
  return table;
}

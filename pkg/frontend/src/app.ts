// Mounts the pivot explorer: a view chooser, the grid, per-axis drill /
// roll / rotation controls, the strict/legacy toggle and the breadcrumb.
// Every control wraps the current expression in one operator and lets the
// Explorer re-query; rotation choices that a declared constraint would
// empty are rendered disabled with the constraint named in the tooltip.

import { ApiClient } from "./api.js";
import { chain } from "./expr.js";
import { renderGrid } from "./grid.js";
import {
  Explorer,
  collapsedDimensions,
  drillTargets,
  hierarchyChoices,
  rollTargets,
} from "./state.js";
import type { Mode, SchemaDoc, TableDoc } from "./types.js";

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

function option(value: string, text = value): HTMLOptionElement {
  const o = document.createElement("option");
  o.value = value;
  o.textContent = text;
  return o;
}

export class App {
  readonly explorer: Explorer;
  readonly root: HTMLElement;

  private grid = el("div", "grid-area");
  private breadcrumb = el("div", "breadcrumb");
  private actions = el("div", "actions");
  private errorBox = el("div", "error-box");
  private warningsBox = el("div", "warnings");
  private chooser = el("form", "chooser");

  constructor(root: HTMLElement, baseUrl: string) {
    this.root = root;
    this.explorer = new Explorer(new ApiClient(baseUrl), {
      onTable: (table) => this.renderTable(table),
      onError: (message) => this.showError(message),
    });
  }

  async start(): Promise<void> {
    const schema = await this.explorer.start();
    this.root.replaceChildren(
      el("h1", "title", `${schema.name} pivot explorer`),
      this.chooser,
      this.errorBox,
      this.breadcrumb,
      this.warningsBox,
      this.grid,
      this.actions,
    );
    this.buildChooser(schema);
  }

  private showError(message: string): void {
    this.errorBox.textContent = message;
    this.errorBox.classList.add("visible");
  }

  private clearError(): void {
    this.errorBox.textContent = "";
    this.errorBox.classList.remove("visible");
  }

  private buildChooser(schema: SchemaDoc): void {
    const factSel = el("select");
    factSel.name = "fact";
    schema.facts.forEach((f) => factSel.appendChild(option(f.name)));
    const rowDim = el("select");
    rowDim.name = "rowDim";
    const colDim = el("select");
    colDim.name = "colDim";
    const rowH = el("select");
    rowH.name = "rowHierarchy";
    const colH = el("select");
    colH.name = "colHierarchy";

    const dimsOf = (factName: string) =>
      schema.facts.find((f) => f.name === factName)?.dimensions ?? [];
    const hierarchiesOf = (dimName: string) =>
      schema.dimensions.find((d) => d.name === dimName)?.hierarchies.map((h) => h.name) ?? [];

    const refreshDims = () => {
      const dims = dimsOf(factSel.value);
      rowDim.replaceChildren(...dims.map((d) => option(d)));
      colDim.replaceChildren(...dims.map((d) => option(d)));
      if (dims.length > 1) colDim.selectedIndex = 1;
      refreshHierarchies();
    };
    const refreshHierarchies = () => {
      rowH.replaceChildren(...hierarchiesOf(rowDim.value).map((h) => option(h)));
      colH.replaceChildren(...hierarchiesOf(colDim.value).map((h) => option(h)));
    };
    factSel.addEventListener("change", refreshDims);
    rowDim.addEventListener("change", refreshHierarchies);
    colDim.addEventListener("change", refreshHierarchies);
    refreshDims();

    const show = el("button", "show-button", "show");
    show.type = "submit";
    this.chooser.addEventListener("submit", (event) => {
      event.preventDefault();
      this.clearError();
      void this.explorer.show(factSel.value, rowDim.value, colDim.value, rowH.value, colH.value);
    });

    const pair = (caption: string, node: HTMLElement) => {
      const wrap = el("label", "field", caption + " ");
      wrap.appendChild(node);
      return wrap;
    };
    this.chooser.replaceChildren(
      pair("fact", factSel),
      pair("rows", rowDim),
      pair("row hierarchy", rowH),
      pair("columns", colDim),
      pair("column hierarchy", colH),
      show,
    );
  }

  private renderTable(table: TableDoc): void {
    this.clearError();
    this.grid.replaceChildren(renderGrid(table));

    this.breadcrumb.replaceChildren();
    chain(this.explorer.expr!).forEach((step, i) => {
      if (i > 0) this.breadcrumb.appendChild(el("span", "sep", " > "));
      this.breadcrumb.appendChild(el("span", "step", step));
    });
    const full = el("code", "expr-text", this.explorer.breadcrumbDsl);
    this.breadcrumb.appendChild(full);

    this.warningsBox.replaceChildren(
      ...table.warnings.map((w) => el("div", "warning", w)),
    );

    this.actions.replaceChildren(
      this.modePanel(table),
      this.axisPanel(table, "row"),
      this.axisPanel(table, "col"),
      this.dimensionPanel(table),
    );
  }

  private modePanel(table: TableDoc): HTMLElement {
    const panel = el("fieldset", "panel mode-panel");
    panel.appendChild(el("legend", undefined, "mode"));
    (["STRICT", "LEGACY"] as Mode[]).forEach((mode) => {
      const button = el("button", "mode-button", mode.toLowerCase());
      button.dataset.mode = mode;
      button.disabled = table.mode === mode;
      button.addEventListener("click", () => void this.explorer.setMode(mode));
      panel.appendChild(button);
    });
    return panel;
  }

  private axisPanel(table: TableDoc, axis: "row" | "col"): HTMLElement {
    const schema = this.explorer.schema;
    const { dim, hierarchy } = table.axes[axis];
    const panel = el("fieldset", `panel axis-panel axis-${axis}`);
    panel.appendChild(el("legend", undefined, `${axis}: ${dim}.${hierarchy}`));

    for (const param of drillTargets(schema, table, axis)) {
      const button = el("button", "drill-button", `drill to ${param}`);
      button.dataset.param = param;
      button.addEventListener("click", () => void this.explorer.drill(dim, param));
      panel.appendChild(button);
    }
    for (const param of rollTargets(table, axis)) {
      const button = el("button", "roll-button", `roll to ${param}`);
      button.dataset.param = param;
      button.addEventListener("click", () => void this.explorer.roll(dim, param));
      panel.appendChild(button);
    }
    for (const maintain of [false, true]) {
      for (const choice of hierarchyChoices(schema, dim, hierarchy, maintain)) {
        const caption = maintain
          ? `rotate to ${choice.hierarchy} (keep analysis)`
          : `rotate to ${choice.hierarchy}`;
        const button = el("button", "hrotate-button", caption);
        button.dataset.hierarchy = choice.hierarchy;
        button.dataset.maintain = String(maintain);
        if (choice.disabled) {
          button.disabled = true;
          button.title = choice.reason!;
        } else {
          button.addEventListener("click", () =>
            void this.explorer.rotateHierarchy(axis, choice.hierarchy, maintain),
          );
        }
        panel.appendChild(button);
      }
    }
    return panel;
  }

  private dimensionPanel(table: TableDoc): HTMLElement {
    const schema = this.explorer.schema;
    const panel = el("fieldset", "panel dim-panel");
    panel.appendChild(el("legend", undefined, "swap a dimension in"));
    for (const dim of collapsedDimensions(schema, table)) {
      for (const h of dim.hierarchies) {
        for (const maintain of [false, true]) {
          for (const axis of ["row", "col"] as const) {
            const caption =
              `${axis} <- ${dim.name}.${h.name}` + (maintain ? " (keep analysis)" : "");
            const button = el("button", "drotate-button", caption);
            button.dataset.dim = dim.name;
            button.dataset.hierarchy = h.name;
            button.dataset.axis = axis;
            button.dataset.maintain = String(maintain);
            button.addEventListener("click", () =>
              void this.explorer.rotateDimension(axis, dim.name, h.name, maintain),
            );
            panel.appendChild(button);
          }
        }
      }
    }
    return panel;
  }
}

export async function mountApp(root: HTMLElement, baseUrl: string): Promise<App> {
  const app = new App(root, baseUrl);
  await app.start();
  return app;
}

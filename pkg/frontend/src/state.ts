// Explorer state: the current expression, the last table, and the
// schema-driven action model (what can be drilled, rolled, rotated, and
// which maintained rotations a declared constraint provably empties).

import {
  dRotate,
  drillDown,
  hRotate,
  rollUp,
  toDsl,
  type QueryNode,
} from "./expr.js";
import type { ConstraintInfo, DimensionInfo, Mode, SchemaDoc, TableDoc } from "./types.js";

/** What the explorer needs from the service (ApiClient satisfies this). */
export interface QueryApi {
  schema(): Promise<SchemaDoc>;
  query(expr: QueryNode, mode: Mode, override?: boolean): Promise<TableDoc>;
}

export interface RotationChoice {
  hierarchy: string;
  disabled: boolean;
  reason?: string; // names the constraint when disabled
}

export function describeConstraint(k: ConstraintInfo): string {
  if (k.scope === "INTRA") {
    return `${k.kind}(${k.left.dimension}: ${k.left.hierarchy}, ${k.right.hierarchy})`;
  }
  return `${k.kind}[${k.fact}](${k.left.dimension}.${k.left.hierarchy}, ${k.right.dimension}.${k.right.hierarchy})`;
}

/**
 * A maintained hierarchy rotation keeps the old member set, so a declared
 * intra exclusion (or partition, which implies one) between the two
 * hierarchies makes the result provably empty.  Nothing else disables an
 * action: the decision reads only declared constraints, never data.
 */
export function emptyingConstraint(
  constraints: ConstraintInfo[],
  dimension: string,
  oldHierarchy: string,
  newHierarchy: string,
): ConstraintInfo | undefined {
  if (oldHierarchy === newHierarchy) return undefined;
  return constraints.find(
    (k) =>
      k.scope === "INTRA" &&
      (k.kind === "EXCLUSION" || k.kind === "PARTITION") &&
      k.left.dimension === dimension &&
      ((k.left.hierarchy === oldHierarchy && k.right.hierarchy === newHierarchy) ||
        (k.left.hierarchy === newHierarchy && k.right.hierarchy === oldHierarchy)),
  );
}

export function hierarchyChoices(
  schema: SchemaDoc,
  dimension: string,
  currentHierarchy: string,
  maintain: boolean,
): RotationChoice[] {
  const dim = schema.dimensions.find((d) => d.name === dimension);
  if (!dim) return [];
  return dim.hierarchies
    .filter((h) => h.name !== currentHierarchy)
    .map((h) => {
      const blocker = maintain
        ? emptyingConstraint(schema.constraints, dimension, currentHierarchy, h.name)
        : undefined;
      return {
        hierarchy: h.name,
        disabled: blocker !== undefined,
        reason: blocker && `empty under declared ${describeConstraint(blocker)}`,
      };
    });
}

/** Parameters of the axis hierarchy strictly finer than the finest shown. */
export function drillTargets(schema: SchemaDoc, table: TableDoc, axis: "row" | "col"): string[] {
  const { dim, hierarchy, params } = table.axes[axis];
  const h = findHierarchy(schema, dim, hierarchy);
  if (!h) return [];
  const finest = params[params.length - 1];
  const index = h.params.indexOf(finest);
  return index <= 0 ? [] : h.params.slice(0, index).reverse();
}

/** Coarser display targets: the shown parameters above the finest, then All. */
export function rollTargets(table: TableDoc, axis: "row" | "col"): string[] {
  const { params } = table.axes[axis];
  const coarser = params.slice(0, -1).reverse();
  return params[0] === "All" ? [] : [...coarser, "All"];
}

function findHierarchy(schema: SchemaDoc, dim: string, hierarchy: string) {
  return schema.dimensions
    .find((d) => d.name === dim)
    ?.hierarchies.find((h) => h.name === hierarchy);
}

export function collapsedDimensions(schema: SchemaDoc, table: TableDoc): DimensionInfo[] {
  return table.collapsed
    .map((name) => schema.dimensions.find((d) => d.name === name))
    .filter((d): d is DimensionInfo => d !== undefined);
}

export interface ExplorerEvents {
  onTable?: (table: TableDoc) => void;
  onError?: (message: string) => void;
}

/**
 * Drives the analysis.  The current expression is the single source of
 * truth; every action wraps it in one operator node and re-queries.  One
 * query is in flight at a time; actions issued meanwhile queue up in
 * order.  A failed action leaves expression and table untouched.
 */
export class Explorer {
  schema!: SchemaDoc;
  expr: QueryNode | null = null;
  table: TableDoc | null = null;
  mode: Mode = "STRICT";

  private queue: Promise<void> = Promise.resolve();

  constructor(
    readonly api: QueryApi,
    readonly events: ExplorerEvents = {},
  ) {}

  async start(): Promise<SchemaDoc> {
    this.schema = await this.api.schema();
    return this.schema;
  }

  get breadcrumbDsl(): string {
    return this.expr ? toDsl(this.expr) : "";
  }

  /** Serialize actions: each runs after the previous settles. */
  private enqueue(action: () => Promise<void>): Promise<void> {
    this.queue = this.queue.then(action, action);
    return this.queue;
  }

  /** Resolves once every queued action has settled. */
  idle(): Promise<void> {
    return this.queue;
  }

  /**
   * Queue one analysis step.  The wrapping node is built when the step
   * RUNS, not when it was issued, so actions queued behind a pending
   * request wrap the expression they will actually extend.
   */
  private apply(make: () => QueryNode | null): Promise<void> {
    return this.enqueue(async () => {
      const next = make();
      if (!next) return;
      try {
        const table = await this.api.query(next, this.mode);
        this.expr = next;
        this.table = table;
        this.events.onTable?.(table);
      } catch (err) {
        this.events.onError?.(err instanceof Error ? err.message : String(err));
      }
    });
  }

  show(fact: string, rowDim: string, colDim: string, rowH: string, colH: string): Promise<void> {
    return this.apply(() => ({
      op: "Display",
      fact,
      rowDim,
      colDim,
      rowHierarchy: rowH,
      colHierarchy: colH,
    }));
  }

  drill(dim: string, param: string): Promise<void> {
    return this.apply(() => this.expr && drillDown(this.expr, dim, param));
  }

  roll(dim: string, param: string): Promise<void> {
    return this.apply(() => this.expr && rollUp(this.expr, dim, param));
  }

  rotateHierarchy(axis: "row" | "col", newHierarchy: string, flag: boolean): Promise<void> {
    return this.apply(() => {
      if (!this.expr || !this.table) return null;
      const { dim, hierarchy } = this.table.axes[axis];
      return hRotate(this.expr, dim, hierarchy, newHierarchy, flag);
    });
  }

  rotateDimension(axis: "row" | "col", newDim: string, hierarchy: string, flag: boolean): Promise<void> {
    return this.apply(() => {
      if (!this.expr || !this.table) return null;
      return dRotate(this.expr, this.table.axes[axis].dim, newDim, hierarchy, flag);
    });
  }

  setMode(mode: Mode): Promise<void> {
    this.mode = mode;
    return this.apply(() => this.expr); // re-evaluate the same expression
  }
}

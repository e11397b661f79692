// JSON shapes exchanged with the analysis service.

export interface AttributeInfo {
  name: string;
  kind: "STRING" | "INT" | "DECIMAL";
}

export interface HierarchyInfo {
  name: string;
  params: string[]; // Id first, All last
  weak: Record<string, string[]>;
  when: string;
  memberCount: number;
}

export interface DimensionInfo {
  name: string;
  attributes: AttributeInfo[];
  hierarchies: HierarchyInfo[];
  instanceCount: number;
}

export interface MeasureInfo {
  name: string;
  kind: string;
  agg: string;
}

export interface FactInfo {
  name: string;
  measures: MeasureInfo[];
  dimensions: string[];
  instanceCount: number;
}

export interface HierarchyRef {
  dimension: string;
  hierarchy: string;
}

export interface ConstraintInfo {
  kind: "EXCLUSION" | "INCLUSION" | "SIMULTANEITY" | "TOTALITY" | "PARTITION";
  scope: "INTRA" | "INTER";
  fact: string | null;
  left: HierarchyRef;
  right: HierarchyRef;
  holds: boolean;
}

export interface SchemaDoc {
  name: string;
  dimensions: DimensionInfo[];
  facts: FactInfo[];
  constraints: ConstraintInfo[];
  consistent: boolean;
}

export type HeaderValue = string | number | null;

export interface MeasureCell {
  raw: number | string | null;
  display: string;
  count: number;
}

export interface CellDoc {
  rowPath: HeaderValue[];
  colPath: HeaderValue[];
  measures: Record<string, MeasureCell>;
}

export interface AxisDoc {
  dim: string;
  hierarchy: string;
  params: string[];
}

export interface TableDoc {
  fact: string;
  mode: "STRICT" | "LEGACY";
  axes: { row: AxisDoc; col: AxisDoc };
  collapsed: string[];
  predicates: { dimension: string; kind: string; text: string }[];
  footers: string[];
  headers: { row: HeaderValue[][]; col: HeaderValue[][] };
  cells: CellDoc[];
  warnings: string[];
  expr: string;
}

export interface ErrorDoc {
  code: string;
  message: string;
  diagnostics?: { severity: string; message: string; line: number; column: number; token: string }[];
}

export type Mode = "STRICT" | "LEGACY";

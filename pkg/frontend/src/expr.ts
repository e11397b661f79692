// Query expression trees, built the way the service's JSON form expects
// them, plus the operator-call rendering used by the breadcrumb.

export interface DisplayNode {
  op: "Display";
  fact: string;
  rowDim: string;
  colDim: string;
  rowHierarchy: string;
  colHierarchy: string;
}

export interface DrillDownNode {
  op: "DrillDown";
  child: QueryNode;
  dim: string;
  param: string;
}

export interface RollUpNode {
  op: "RollUp";
  child: QueryNode;
  dim: string;
  param: string;
}

export interface HRotateNode {
  op: "HRotate";
  child: QueryNode;
  dim: string;
  oldHierarchy: string;
  newHierarchy: string;
  flag: boolean;
}

export interface DRotateNode {
  op: "DRotate";
  child: QueryNode;
  oldDim: string;
  newDim: string;
  hierarchy: string;
  flag: boolean;
}

export type QueryNode = DisplayNode | DrillDownNode | RollUpNode | HRotateNode | DRotateNode;

export function display(
  fact: string,
  rowDim: string,
  colDim: string,
  rowHierarchy: string,
  colHierarchy: string,
): DisplayNode {
  return { op: "Display", fact, rowDim, colDim, rowHierarchy, colHierarchy };
}

export function drillDown(child: QueryNode, dim: string, param: string): DrillDownNode {
  return { op: "DrillDown", child, dim, param };
}

export function rollUp(child: QueryNode, dim: string, param: string): RollUpNode {
  return { op: "RollUp", child, dim, param };
}

export function hRotate(
  child: QueryNode,
  dim: string,
  oldHierarchy: string,
  newHierarchy: string,
  flag: boolean,
): HRotateNode {
  return { op: "HRotate", child, dim, oldHierarchy, newHierarchy, flag };
}

export function dRotate(
  child: QueryNode,
  oldDim: string,
  newDim: string,
  hierarchy: string,
  flag: boolean,
): DRotateNode {
  return { op: "DRotate", child, oldDim, newDim, hierarchy, flag };
}

/** The canonical operator-call text, matching the service's own formatter. */
export function toDsl(node: QueryNode): string {
  switch (node.op) {
    case "Display":
      return `Display(${node.fact}, ${node.rowDim}, ${node.colDim}, ${node.rowHierarchy}, ${node.colHierarchy})`;
    case "DrillDown":
      return `DrillDown(${toDsl(node.child)}, ${node.dim}, ${node.param})`;
    case "RollUp":
      return `RollUp(${toDsl(node.child)}, ${node.dim}, ${node.param})`;
    case "HRotate":
      return `HRotate(${toDsl(node.child)}, ${node.dim}, ${node.oldHierarchy}, ${node.newHierarchy}, ${node.flag})`;
    case "DRotate":
      return `DRotate(${toDsl(node.child)}, ${node.oldDim}, ${node.newDim}, ${node.hierarchy}, ${node.flag})`;
  }
}

/** One label per operator, innermost first, for the breadcrumb chain. */
export function chain(node: QueryNode): string[] {
  const labels: string[] = [];
  let current: QueryNode | undefined = node;
  while (current) {
    switch (current.op) {
      case "Display":
        labels.push(`Display(${current.fact}: ${current.rowDim} x ${current.colDim})`);
        current = undefined;
        break;
      case "DrillDown":
        labels.push(`DrillDown(${current.dim} -> ${current.param})`);
        current = current.child;
        break;
      case "RollUp":
        labels.push(`RollUp(${current.dim} -> ${current.param})`);
        current = current.child;
        break;
      case "HRotate":
        labels.push(
          `HRotate(${current.dim}: ${current.oldHierarchy} -> ${current.newHierarchy}${current.flag ? ", maintained" : ""})`,
        );
        current = current.child;
        break;
      case "DRotate":
        labels.push(
          `DRotate(${current.oldDim} -> ${current.newDim}.${current.hierarchy}${current.flag ? ", maintained" : ""})`,
        );
        current = current.child;
        break;
    }
  }
  return labels.reverse();
}

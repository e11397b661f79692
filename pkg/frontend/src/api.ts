// Thin client for the three service endpoints the explorer uses.

import type { QueryNode } from "./expr.js";
import type { ErrorDoc, Mode, SchemaDoc, TableDoc } from "./types.js";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly body: ErrorDoc,
  ) {
    super(body.message ?? `request failed with ${status}`);
  }
}

export class ApiClient {
  constructor(readonly baseUrl: string) {}

  async schema(): Promise<SchemaDoc> {
    const resp = await fetch(`${this.baseUrl}/schema`);
    if (!resp.ok) throw new ApiError(resp.status, await resp.json());
    return resp.json();
  }

  async query(expr: QueryNode, mode: Mode, override = false): Promise<TableDoc> {
    const resp = await fetch(`${this.baseUrl}/query`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ query: expr, mode, override }),
    });
    if (!resp.ok) throw new ApiError(resp.status, await resp.json());
    return resp.json();
  }

  async validate(): Promise<{ allHold: boolean; results: unknown[] }> {
    const resp = await fetch(`${this.baseUrl}/validate`, { method: "POST", body: "{}" });
    if (!resp.ok) throw new ApiError(resp.status, await resp.json());
    return resp.json();
  }
}

import type { BlockRecord } from "../src/api.js";

export function jsonResponse(status: number, body: unknown): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "Content-Type": "application/json" },
  });
}

export function errorResponse(
  status: number,
  code: string,
  message: string,
  field?: string,
): Response {
  return jsonResponse(status, { error: { code, message, ...(field ? { field } : {}) } });
}

let counter = 0;

export function makeBlock(overrides: Partial<BlockRecord> = {}): BlockRecord {
  counter += 1;
  return {
    index: counter,
    network_id: "NET-01",
    predicted_battery_life: 57.15,
    date_of_prediction: "2020-07-15",
    created_at: 1000 + counter,
    prev_hash: "b".repeat(64),
    creator_key_id: "authority-1",
    signature: "c".repeat(128),
    hash: `${counter.toString(16).padStart(4, "0")}${"a".repeat(60)}`,
    ...overrides,
  };
}

import { afterEach, describe, expect, it, vi } from "vitest";

import { ApiClient, ApiError } from "../src/api.js";
import { errorResponse, jsonResponse, makeBlock } from "./helpers.js";

afterEach(() => {
  vi.unstubAllGlobals();
});

describe("ApiClient.submitBlock", () => {
  it("posts the body with a bearer token and returns the block", async () => {
    const block = makeBlock();
    const fetchMock = vi.fn(async () => jsonResponse(201, { block }));
    vi.stubGlobal("fetch", fetchMock);

    const client = new ApiClient("http://api.example");
    const request = {
      network_id: "NET-01",
      predicted_battery_life: 57.15,
      date_of_prediction: "2020-07-15",
    };
    const created = await client.submitBlock(request, "secret-token");

    expect(created).toEqual(block);
    const [url, init] = fetchMock.mock.calls[0]!;
    expect(url).toBe("http://api.example/api/blocks");
    expect(init!.method).toBe("POST");
    expect((init!.headers as Record<string, string>).Authorization).toBe("Bearer secret-token");
    expect(JSON.parse(init!.body as string)).toEqual(request);
  });

  it("surfaces the server's structured error", async () => {
    vi.stubGlobal("fetch", vi.fn(async () =>
      errorResponse(422, "bad-field", "must be ISO-8601", "date_of_prediction"),
    ));
    const client = new ApiClient();
    const error = await client
      .submitBlock(
        { network_id: "N", predicted_battery_life: 1, date_of_prediction: "x" },
        "t",
      )
      .catch((e: unknown) => e as ApiError);
    expect(error).toBeInstanceOf(ApiError);
    expect((error as ApiError).status).toBe(422);
    expect((error as ApiError).body?.field).toBe("date_of_prediction");
  });
});

describe("ApiClient.searchBlocks", () => {
  it("encodes the query parameter", async () => {
    const fetchMock = vi.fn(async () => jsonResponse(200, { blocks: [] }));
    vi.stubGlobal("fetch", fetchMock);
    await new ApiClient().searchBlocks("NET 01/a");
    expect(fetchMock.mock.calls[0]![0]).toBe("/api/blocks?network_id=NET%2001%2Fa");
  });

  it("returns the block list as sent", async () => {
    const blocks = [makeBlock(), makeBlock()];
    vi.stubGlobal("fetch", vi.fn(async () => jsonResponse(200, { blocks })));
    expect(await new ApiClient().searchBlocks("NET-01")).toEqual(blocks);
  });
});

describe("ApiClient.chainStatus", () => {
  it("parses the status body", async () => {
    vi.stubGlobal("fetch", vi.fn(async () =>
      jsonResponse(200, { length: 4, head_hash: "ff".repeat(32), valid: true }),
    ));
    const status = await new ApiClient().chainStatus();
    expect(status.valid).toBe(true);
    expect(status.length).toBe(4);
  });

  it("throws ApiError with a plain-text error body", async () => {
    vi.stubGlobal("fetch", vi.fn(async () => new Response("boom", { status: 500 })));
    await expect(new ApiClient().chainStatus()).rejects.toBeInstanceOf(ApiError);
  });
});

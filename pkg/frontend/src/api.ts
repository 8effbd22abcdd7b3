/** Typed client for the prediction-ledger HTTP API. */

export interface BlockRecord {
  index: number;
  network_id: string;
  predicted_battery_life: number;
  date_of_prediction: string;
  created_at: number;
  prev_hash: string;
  creator_key_id: string;
  signature: string;
  hash: string;
}

export interface BlockRequest {
  network_id: string;
  predicted_battery_life: number;
  date_of_prediction: string;
}

export interface ChainStatus {
  length: number;
  head_hash: string;
  valid: boolean;
  tamper_index?: number;
}

export interface ApiErrorBody {
  code: string;
  message: string;
  field?: string;
}

/** Non-2xx response, carrying the server's structured error when present. */
export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly body: ApiErrorBody | null,
  ) {
    super(body?.message ?? `request failed with status ${status}`);
    this.name = "ApiError";
  }
}

async function parseError(response: Response): Promise<ApiError> {
  let body: ApiErrorBody | null = null;
  try {
    const payload = (await response.json()) as { error?: ApiErrorBody };
    body = payload.error ?? null;
  } catch {
    // non-JSON error body; status alone will have to do
  }
  return new ApiError(response.status, body);
}

export class ApiClient {
  constructor(private readonly baseUrl: string = "") {}

  /** POST /api/blocks with the admin bearer token. */
  async submitBlock(request: BlockRequest, token: string): Promise<BlockRecord> {
    const response = await fetch(`${this.baseUrl}/api/blocks`, {
      method: "POST",
      headers: {
        "Content-Type": "application/json",
        Authorization: `Bearer ${token}`,
      },
      body: JSON.stringify(request),
    });
    if (!response.ok) throw await parseError(response);
    const payload = (await response.json()) as { block: BlockRecord };
    return payload.block;
  }

  /** GET /api/blocks?network_id=… */
  async searchBlocks(networkId: string): Promise<BlockRecord[]> {
    const query = encodeURIComponent(networkId);
    const response = await fetch(`${this.baseUrl}/api/blocks?network_id=${query}`);
    if (!response.ok) throw await parseError(response);
    const payload = (await response.json()) as { blocks: BlockRecord[] };
    return payload.blocks;
  }

  /** GET /api/chain */
  async chainStatus(): Promise<ChainStatus> {
    const response = await fetch(`${this.baseUrl}/api/chain`);
    if (!response.ok) throw await parseError(response);
    return (await response.json()) as ChainStatus;
  }
}

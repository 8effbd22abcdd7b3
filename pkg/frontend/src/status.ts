/** Chain status badge: length plus VALID / TAMPERED / unknown.
 *
 * Polls GET /api/chain; the server is the verifier, the badge only
 * reports what it said. A failed poll shows gray "unknown" until the
 * next round succeeds.
 */

import { ApiClient } from "./api.js";

export class StatusWidget {
  private timer: ReturnType<typeof setInterval> | null = null;

  constructor(
    private readonly root: HTMLElement,
    private readonly client: ApiClient,
    private readonly intervalMs: number = 5000,
  ) {
    this.root.innerHTML = `<span class="badge badge-unknown">chain: unknown</span>`;
  }

  start(): void {
    void this.poll();
    this.timer = setInterval(() => void this.poll(), this.intervalMs);
  }

  stop(): void {
    if (this.timer !== null) clearInterval(this.timer);
    this.timer = null;
  }

  async poll(): Promise<void> {
    const badge = this.root.querySelector(".badge") as HTMLElement;
    try {
      const status = await this.client.chainStatus();
      if (status.valid) {
        badge.className = "badge badge-valid";
        badge.textContent = `chain: VALID, length ${status.length}`;
      } else {
        badge.className = "badge badge-tampered";
        badge.textContent = `chain: TAMPERED at index ${status.tamper_index}`;
      }
    } catch {
      badge.className = "badge badge-unknown";
      badge.textContent = "chain: unknown";
    }
  }
}

/** Stakeholder page: list every committed block for one network id.
 *
 * Rendered cells are taken verbatim from the API payload (numbers via
 * their canonical string form, strings untouched); the hash column shows
 * a 12-character prefix and keeps the full hash in a data attribute.
 * One request is in flight per view: responses from superseded searches
 * are discarded by sequence number.
 */

import { ApiClient, BlockRecord } from "./api.js";

export const HASH_PREFIX_LENGTH = 12;

export class SearchView {
  private sequence = 0;
  private lastQuery = "";

  constructor(
    private readonly root: HTMLElement,
    private readonly client: ApiClient,
  ) {
    this.render();
  }

  private render(): void {
    this.root.innerHTML = `
      <form class="search-form">
        <input name="network_id" type="text" placeholder="Network id" autocomplete="off">
        <button type="submit">Search</button>
      </form>
      <div class="search-status" hidden></div>
      <div class="search-results"></div>
    `;
    this.form().addEventListener("submit", (event) => {
      event.preventDefault();
      void this.search(this.queryInput().value.trim());
    });
  }

  private form(): HTMLFormElement {
    return this.root.querySelector("form") as HTMLFormElement;
  }

  private queryInput(): HTMLInputElement {
    return this.form().elements.namedItem("network_id") as HTMLInputElement;
  }

  private status(): HTMLElement {
    return this.root.querySelector(".search-status") as HTMLElement;
  }

  private results(): HTMLElement {
    return this.root.querySelector(".search-results") as HTMLElement;
  }

  async search(networkId: string): Promise<void> {
    if (networkId === "") return;
    this.lastQuery = networkId;
    const ticket = ++this.sequence;
    const status = this.status();
    status.hidden = false;
    status.className = "search-status loading";
    status.textContent = "loading…";
    try {
      const blocks = await this.client.searchBlocks(networkId);
      if (ticket !== this.sequence) return; // superseded; drop stale response
      status.hidden = true;
      this.renderRows(blocks);
    } catch {
      if (ticket !== this.sequence) return;
      status.className = "search-status error";
      status.textContent = "could not reach the service — ";
      const retry = document.createElement("button");
      retry.type = "button";
      retry.textContent = "retry";
      retry.addEventListener("click", () => void this.search(this.lastQuery));
      status.appendChild(retry);
      this.results().innerHTML = "";
    }
  }

  private renderRows(blocks: BlockRecord[]): void {
    const results = this.results();
    if (blocks.length === 0) {
      results.innerHTML = `<p class="empty-state">no records for this network id</p>`;
      return;
    }
    const table = document.createElement("table");
    table.innerHTML = `
      <thead>
        <tr><th>index</th><th>battery life</th><th>date</th><th>hash</th></tr>
      </thead>
    `;
    const body = document.createElement("tbody");
    for (const block of blocks) {
      const row = document.createElement("tr");
      const cells = [
        String(block.index),
        String(block.predicted_battery_life),
        block.date_of_prediction,
        block.hash.slice(0, HASH_PREFIX_LENGTH),
      ];
      for (const text of cells) {
        const cell = document.createElement("td");
        cell.textContent = text;
        row.appendChild(cell);
      }
      row.dataset.hash = block.hash;
      body.appendChild(row);
    }
    table.appendChild(body);
    results.innerHTML = "";
    results.appendChild(table);
  }
}

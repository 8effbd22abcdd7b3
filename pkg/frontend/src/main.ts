/** Bootstrap: two pages (Admin, Search) and the chain status badge.
 *
 * The API base URL is configurable at deploy time via a
 * `window.API_BASE` global (set in index.html); it defaults to the
 * page's own origin.
 */

import { AdminView } from "./admin.js";
import { ApiClient } from "./api.js";
import { SearchView } from "./search.js";
import { StatusWidget } from "./status.js";

declare global {
  interface Window {
    API_BASE?: string;
  }
}

export function mount(root: HTMLElement, client: ApiClient): void {
  root.innerHTML = `
    <header>
      <h1>sensorchain console</h1>
      <nav>
        <button data-page="admin" class="active">Admin</button>
        <button data-page="search">Search</button>
      </nav>
      <div id="chain-status"></div>
    </header>
    <main>
      <section id="page-admin"></section>
      <section id="page-search" hidden></section>
    </main>
  `;

  new AdminView(root.querySelector("#page-admin") as HTMLElement, client);
  new SearchView(root.querySelector("#page-search") as HTMLElement, client);
  const status = new StatusWidget(root.querySelector("#chain-status") as HTMLElement, client);
  status.start();

  const tabs = root.querySelectorAll<HTMLButtonElement>("nav button");
  tabs.forEach((tab) =>
    tab.addEventListener("click", () => {
      tabs.forEach((other) => other.classList.toggle("active", other === tab));
      for (const page of ["admin", "search"]) {
        (root.querySelector(`#page-${page}`) as HTMLElement).hidden =
          tab.dataset.page !== page;
      }
    }),
  );
}

if (typeof document !== "undefined" && document.getElementById("app")) {
  const client = new ApiClient(window.API_BASE ?? "");
  mount(document.getElementById("app") as HTMLElement, client);
}

/** Admin page: create and commit a prediction block.
 *
 * The token field lives only in this form's DOM state and the submit
 * request; it is never written to storage. On success the three data
 * fields clear (the token stays for the next entry); on any failure the
 * form is preserved so the admin can correct and retry.
 */

import { ApiClient, ApiError } from "./api.js";
import { AdminFormFields, validateAdminForm } from "./validation.js";

const FIELDS: (keyof AdminFormFields)[] = [
  "network_id",
  "predicted_battery_life",
  "date_of_prediction",
];

export class AdminView {
  private busy = false;

  constructor(
    private readonly root: HTMLElement,
    private readonly client: ApiClient,
  ) {
    this.render();
  }

  private render(): void {
    this.root.innerHTML = `
      <form class="admin-form" novalidate>
        <label>Network id
          <input name="network_id" type="text" autocomplete="off">
          <span class="field-error" data-for="network_id"></span>
        </label>
        <label>Predicted battery life
          <input name="predicted_battery_life" type="text" inputmode="decimal" autocomplete="off">
          <span class="field-error" data-for="predicted_battery_life"></span>
        </label>
        <label>Date of prediction
          <input name="date_of_prediction" type="date">
          <span class="field-error" data-for="date_of_prediction"></span>
        </label>
        <label>Admin token
          <input name="admin_token" type="password" autocomplete="off">
        </label>
        <button type="submit" disabled>Create block</button>
        <div class="banner" hidden></div>
      </form>
    `;
    const form = this.form();
    form.addEventListener("input", () => this.refreshValidity(false));
    form.addEventListener("submit", (event) => {
      event.preventDefault();
      void this.submit();
    });
  }

  private form(): HTMLFormElement {
    return this.root.querySelector("form") as HTMLFormElement;
  }

  private input(name: string): HTMLInputElement {
    return this.form().elements.namedItem(name) as HTMLInputElement;
  }

  fields(): AdminFormFields {
    return {
      network_id: this.input("network_id").value,
      predicted_battery_life: this.input("predicted_battery_life").value,
      date_of_prediction: this.input("date_of_prediction").value,
    };
  }

  /** Re-validate; render inline errors (only for touched-or-forced fields). */
  refreshValidity(showAll: boolean): boolean {
    const errors = validateAdminForm(this.fields());
    for (const name of FIELDS) {
      const slot = this.root.querySelector(
        `.field-error[data-for="${name}"]`,
      ) as HTMLElement;
      const message = errors[name];
      const touched = this.input(name).value !== "" || showAll;
      slot.textContent = message && touched ? message : "";
    }
    const valid = Object.keys(errors).length === 0;
    (this.form().querySelector("button") as HTMLButtonElement).disabled = !valid || this.busy;
    return valid;
  }

  private banner(kind: "success" | "error", text: string): void {
    const banner = this.root.querySelector(".banner") as HTMLElement;
    banner.hidden = false;
    banner.className = `banner banner-${kind}`;
    banner.textContent = text;
  }

  async submit(): Promise<void> {
    if (this.busy) return;
    if (!this.refreshValidity(true)) return; // invalid: inline errors, no request
    const fields = this.fields();
    this.busy = true;
    this.refreshValidity(true);
    try {
      const block = await this.client.submitBlock(
        {
          network_id: fields.network_id.trim(),
          predicted_battery_life: Number(fields.predicted_battery_life),
          date_of_prediction: fields.date_of_prediction,
        },
        this.input("admin_token").value,
      );
      this.banner("success", `Block ${block.index} committed, hash ${block.hash}`);
      for (const name of FIELDS) this.input(name).value = "";
    } catch (error) {
      if (error instanceof ApiError && error.status === 401) {
        this.banner("error", "unauthorized: check the admin token");
      } else if (error instanceof ApiError && error.body?.field) {
        const slot = this.root.querySelector(
          `.field-error[data-for="${error.body.field}"]`,
        ) as HTMLElement | null;
        if (slot) slot.textContent = error.body.message;
        this.banner("error", "the server rejected the block");
      } else if (error instanceof ApiError) {
        this.banner("error", error.message);
      } else {
        this.banner("error", "network error: is the service reachable?");
      }
    } finally {
      // Re-enable the button without re-rendering inline errors, so a
      // server-reported field message survives until the next edit.
      this.busy = false;
      const valid = Object.keys(validateAdminForm(this.fields())).length === 0;
      (this.form().querySelector("button") as HTMLButtonElement).disabled = !valid;
    }
  }
}

/** Client-side validation of the admin block-creation form. */

export interface AdminFormFields {
  network_id: string;
  predicted_battery_life: string;
  date_of_prediction: string;
}

export type FieldErrors = Partial<Record<keyof AdminFormFields, string>>;

const DATE_PATTERN = /^\d{4}-\d{2}-\d{2}$/;

function isRealDate(text: string): boolean {
  const [year, month, day] = text.split("-").map(Number);
  if (year === undefined || month === undefined || day === undefined) return false;
  const date = new Date(Date.UTC(year, month - 1, day));
  return (
    date.getUTCFullYear() === year &&
    date.getUTCMonth() === month - 1 &&
    date.getUTCDate() === day
  );
}

/** Field-level problems; an empty result means the form may be submitted. */
export function validateAdminForm(fields: AdminFormFields): FieldErrors {
  const errors: FieldErrors = {};
  if (fields.network_id.trim() === "") {
    errors.network_id = "required";
  }
  const bl = fields.predicted_battery_life.trim();
  if (bl === "") {
    errors.predicted_battery_life = "required";
  } else if (!Number.isFinite(Number(bl))) {
    errors.predicted_battery_life = "must be a number";
  }
  const date = fields.date_of_prediction.trim();
  if (date === "") {
    errors.date_of_prediction = "required";
  } else if (!DATE_PATTERN.test(date) || !isRealDate(date)) {
    errors.date_of_prediction = "must be a date (YYYY-MM-DD)";
  }
  return errors;
}

export function formIsValid(fields: AdminFormFields): boolean {
  return Object.keys(validateAdminForm(fields)).length === 0;
}

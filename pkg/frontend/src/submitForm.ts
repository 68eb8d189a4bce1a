// Submit form state machine: basic requests need accession + email; advanced
// requests additionally require at least one checked subclass before the
// submit action unlocks.

import type { ApiErrorBody } from "./api.js";

export type FormMode = "BASIC" | "ADVANCED";
export type FormField = "accession" | "email" | "subclasses";

export interface SubmitFormState {
  accession: string;
  email: string;
  mode: FormMode;
  selectedSubclasses: string[];
  fieldErrors: Partial<Record<FormField, string>>;
}

export function emptyForm(): SubmitFormState {
  return {
    accession: "",
    email: "",
    mode: "BASIC",
    selectedSubclasses: [],
    fieldErrors: {},
  };
}

export function canSubmit(state: SubmitFormState): boolean {
  if (!state.accession.trim() || !state.email.trim()) return false;
  if (state.mode === "ADVANCED" && state.selectedSubclasses.length === 0) return false;
  return true;
}

export function setField(
  state: SubmitFormState,
  field: "accession" | "email",
  value: string,
): SubmitFormState {
  const errors = { ...state.fieldErrors };
  delete errors[field];
  return { ...state, [field]: value, fieldErrors: errors };
}

export function setMode(state: SubmitFormState, mode: FormMode): SubmitFormState {
  return { ...state, mode };
}

export function toggleSubclass(state: SubmitFormState, id: string): SubmitFormState {
  const selected = state.selectedSubclasses.includes(id)
    ? state.selectedSubclasses.filter((s) => s !== id)
    : [...state.selectedSubclasses, id];
  const errors = { ...state.fieldErrors };
  delete errors.subclasses;
  return { ...state, selectedSubclasses: selected, fieldErrors: errors };
}

export function payloadFor(state: SubmitFormState): {
  accession: string;
  email: string;
  mode: FormMode;
  subclasses?: string[];
} {
  const payload = {
    accession: state.accession.trim(),
    email: state.email.trim(),
    mode: state.mode,
  };
  return state.mode === "ADVANCED"
    ? { ...payload, subclasses: [...state.selectedSubclasses] }
    : payload;
}

const ERROR_FIELD: Record<string, FormField> = {
  InvalidAccession: "accession",
  InvalidRequest: "email",
  InvalidSubclass: "subclasses",
};

export function applyApiError(state: SubmitFormState, error: ApiErrorBody): SubmitFormState {
  const field = ERROR_FIELD[error.code] ?? "accession";
  return { ...state, fieldErrors: { ...state.fieldErrors, [field]: error.message } };
}

// "Re-run with different subclasses": opens the advanced form with the
// accession pre-filled and the previous selection (if any) kept.
export function prefillAdvanced(accession: string, subclasses: string[] = []): SubmitFormState {
  return {
    accession,
    email: "",
    mode: "ADVANCED",
    selectedSubclasses: [...subclasses],
    fieldErrors: {},
  };
}

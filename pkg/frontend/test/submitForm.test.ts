import { describe, expect, it } from "vitest";

import {
  applyApiError,
  canSubmit,
  emptyForm,
  payloadFor,
  prefillAdvanced,
  setField,
  setMode,
  toggleSubclass,
} from "../src/submitForm.js";

function filledBasic() {
  let state = emptyForm();
  state = setField(state, "accession", "4F47");
  state = setField(state, "email", "curator@example.org");
  return state;
}

describe("submit form", () => {
  it("basic submit unlocks once accession and email are set", () => {
    expect(canSubmit(emptyForm())).toBe(false);
    expect(canSubmit(filledBasic())).toBe(true);
  });

  it("advanced submit stays disabled until a subclass is checked", () => {
    let state = setMode(filledBasic(), "ADVANCED");
    expect(canSubmit(state)).toBe(false);
    state = toggleSubclass(state, "3.3");
    expect(canSubmit(state)).toBe(true);
    state = toggleSubclass(state, "3.3"); // uncheck again
    expect(canSubmit(state)).toBe(false);
  });

  it("payload carries subclasses only for advanced requests", () => {
    const basic = payloadFor(filledBasic());
    expect(basic).toEqual({
      accession: "4F47",
      email: "curator@example.org",
      mode: "BASIC",
    });

    let advanced = setMode(filledBasic(), "ADVANCED");
    advanced = toggleSubclass(advanced, "3.3");
    advanced = toggleSubclass(advanced, "4.4");
    expect(payloadFor(advanced).subclasses).toEqual(["3.3", "4.4"]);
  });

  it("maps API errors onto the offending field", () => {
    const accErr = applyApiError(filledBasic(), {
      code: "InvalidAccession",
      message: "unrecognized accession 'banana!'",
    });
    expect(accErr.fieldErrors.accession).toContain("banana!");

    const emailErr = applyApiError(filledBasic(), {
      code: "InvalidRequest",
      message: "email is required",
    });
    expect(emailErr.fieldErrors.email).toBe("email is required");

    const subErr = applyApiError(filledBasic(), {
      code: "InvalidSubclass",
      message: "unknown subclass '9.9'",
    });
    expect(subErr.fieldErrors.subclasses).toContain("9.9");
  });

  it("editing a field clears its error", () => {
    let state = applyApiError(filledBasic(), {
      code: "InvalidAccession",
      message: "nope",
    });
    state = setField(state, "accession", "1ABC");
    expect(state.fieldErrors.accession).toBeUndefined();
  });

  it("re-run action pre-fills the advanced form with the accession", () => {
    const state = prefillAdvanced("SYN1");
    expect(state.mode).toBe("ADVANCED");
    expect(state.accession).toBe("SYN1");
    expect(state.selectedSubclasses).toEqual([]);
    expect(canSubmit(state)).toBe(false); // still needs email + subclass
  });
});

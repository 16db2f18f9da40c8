import { describe, expect, it } from "vitest";

import { percentFromDecimal, pluralRounds } from "../src/format.js";

describe("percentFromDecimal", () => {
  it("renders service decimals at four places", () => {
    expect(percentFromDecimal("0.3600000000")).toBe("36.0000%");
    expect(percentFromDecimal("0.6000000000")).toBe("60.0000%");
    expect(percentFromDecimal("0.9998784517")).toBe("99.9878%");
    expect(percentFromDecimal("1.000000000")).toBe("100.0000%");
    expect(percentFromDecimal("0")).toBe("0.0000%");
  });

  it("pads short decimals", () => {
    expect(percentFromDecimal("0.5")).toBe("50.0000%");
    expect(percentFromDecimal("1")).toBe("100.0000%");
  });

  it("rounds half to even", () => {
    expect(percentFromDecimal("0.1234565")).toBe("12.3456%");
    expect(percentFromDecimal("0.1234575")).toBe("12.3458%");
    expect(percentFromDecimal("0.12345651")).toBe("12.3457%");
  });

  it("carries across the decimal point", () => {
    expect(percentFromDecimal("0.99999999")).toBe("100.0000%");
  });
});

describe("pluralRounds", () => {
  it("reads naturally", () => {
    expect(pluralRounds(1)).toBe("1 round");
    expect(pluralRounds(2)).toBe("2 rounds");
  });
});

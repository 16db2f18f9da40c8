// Presentation-only helpers.  Probabilities always arrive as decimal
// strings from the service; turning them into percentages is pure string
// arithmetic (shift two places, round half-even to 4 decimals), never
// floating point.

export function percentFromDecimal(decimal: string): string {
  let text = decimal.trim();
  let sign = "";
  if (text.startsWith("-")) {
    sign = "-";
    text = text.slice(1);
  }
  const dot = text.indexOf(".");
  let intPart = dot < 0 ? text : text.slice(0, dot);
  let fracPart = dot < 0 ? "" : text.slice(dot + 1);
  // shift the decimal point two places right (multiply by 100)
  fracPart = fracPart.padEnd(2, "0");
  intPart = (intPart + fracPart.slice(0, 2)).replace(/^0+(?=\d)/, "");
  fracPart = fracPart.slice(2);

  // round to exactly 4 decimals, ties to even
  const digits = fracPart.padEnd(5, "0");
  let units = BigInt(intPart + digits.slice(0, 4)); // value in 1e-4 units
  const rest = digits.slice(4).replace(/0+$/, "");
  const roundUp =
    rest.length > 0 &&
    (rest[0] > "5" ||
      (rest[0] === "5" && (rest.length > 1 || units % 2n === 1n)));
  if (roundUp) {
    units += 1n;
  }
  const s = units.toString().padStart(5, "0");
  return `${sign}${s.slice(0, -4)}.${s.slice(-4)}%`;
}

export function pluralRounds(n: number): string {
  return n === 1 ? "1 round" : `${n} rounds`;
}

/** Deterministic sample CSV shared by the tests. */

const STATES = ["California", "Texas", "Ohio", "New York", "Florida"];
const CATEGORIES = ["Furniture", "Office Supplies", "Technology"];
const SEGMENTS = ["Consumer", "Corporate", "Home Office"];

/** Small deterministic LCG so every run uploads an identical dataset. */
function lcg(seed: number): () => number {
  let s = seed >>> 0;
  return () => {
    s = (s * 1664525 + 1013904223) >>> 0;
    return s / 2 ** 32;
  };
}

export function sampleCsv(rows = 300, seed = 7): string {
  const rand = lcg(seed);
  const lines = ["Sales,Profit,Category,Segment,State,Date"];
  for (let i = 0; i < rows; i++) {
    const sales = (rand() * 500).toFixed(2);
    const profit = (rand() * 200 - 50).toFixed(2);
    const category = CATEGORIES[Math.floor(rand() * CATEGORIES.length)];
    const segment = SEGMENTS[Math.floor(rand() * SEGMENTS.length)];
    const state = STATES[Math.floor(rand() * STATES.length)];
    const year = 2020 + Math.floor(rand() * 2);
    const month = 1 + Math.floor(rand() * 12);
    const day = 1 + Math.floor(rand() * 28);
    const date = `${year}-${String(month).padStart(2, "0")}-${String(day).padStart(2, "0")}`;
    lines.push(`${sales},${profit},${category},${segment},${state},${date}`);
  }
  return lines.join("\n") + "\n";
}

export function baseUrl(): string {
  const url = process.env.MEDLEY_BASE_URL;
  if (!url) throw new Error("service not started (MEDLEY_BASE_URL unset)");
  return url;
}

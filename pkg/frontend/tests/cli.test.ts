import { mkdtempSync, readFileSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { fileURLToPath } from "node:url";
import { describe, expect, it } from "vitest";

import { main, renderFile } from "../src/cli.js";

const fixture = (name: string) =>
  fileURLToPath(new URL(`./fixtures/${name}`, import.meta.url));
const fix = (name: string) => readFileSync(fixture(name), "utf-8");
const tmp = () => mkdtempSync(join(tmpdir(), "plots-"));

describe("plots cli", () => {
  it.each([
    ["histogram", "hist.csv"],
    ["bler", "bler.csv"],
    ["de-table", "detable.csv"],
  ] as const)("renders %s to an SVG file", (kind, name) => {
    const out = join(tmp(), "fig.svg");
    expect(main([kind, fixture(name), "-o", out])).toBe(0);
    const svg = readFileSync(out, "utf-8");
    expect(svg.startsWith("<svg ")).toBe(true);
    expect(svg).toContain("</svg>");
  });

  it("is deterministic for byte-identical inputs", () => {
    const a = renderFile("histogram", fix("hist.csv"));
    const b = renderFile("histogram", fix("hist.csv"));
    expect(a).toBe(b);
  });

  it("draws one bar per histogram bin", () => {
    const svg = renderFile("histogram", fix("hist.csv"));
    const bars = svg.match(/<rect [^>]*fill="#1f77b4"/g) ?? [];
    // golden fixture: 7 bins at k=48 plus 8 bins at k=96
    expect(bars.length).toBe(15);
  });

  it("annotates empty data with axes and 'no data'", () => {
    for (const [kind, header] of [
      ["histogram", "k,trial,eps_hat,attempts,undetected,censored"],
      ["bler", "C,epsilon,trials,block_errors,undetected"],
      ["de-table", "m,dc,epsilon_star"],
    ] as const) {
      const svg = renderFile(kind, header + "\n");
      expect(svg).toContain("no data");
    }
  });

  it("plots BLER on a log axis with capacity legend entries", () => {
    const svg = renderFile("bler", fix("bler.csv"));
    expect(svg).toContain("1e-4");
    expect(svg).toContain("C = 1");
    expect(svg).toContain("C = 0.5");
  });

  it("exits 2 with a diagnostic on schema mismatch", () => {
    const dir = tmp();
    const bad = join(dir, "bad.csv");
    writeFileSync(bad, "x,y\n1,2\n");
    expect(main(["histogram", bad, "-o", join(dir, "out.svg")])).toBe(2);
    // feeding the wrong (but valid) schema is also a mismatch
    expect(main(["bler", fixture("hist.csv"), "-o", join(dir, "out.svg")])).toBe(2);
  });

  it("exits 2 when the input file is missing", () => {
    const dir = tmp();
    expect(main(["histogram", join(dir, "nope.csv"), "-o", join(dir, "o.svg")])).toBe(2);
  });
});

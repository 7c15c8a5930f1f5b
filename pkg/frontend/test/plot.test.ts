import { mkdtempSync, readFileSync, writeFileSync, existsSync } from "fs";
import { tmpdir } from "os";
import path from "path";
import { describe, expect, it } from "vitest";

import { buildFigure, parseStudyCsv, SchemaError } from "../src/plot.js";
import { main } from "../src/render.js";

const FIXTURE = path.join(__dirname, "fixtures", "fig52.csv");

const HEADER =
  "study_label,scheme,potential,nonlinearity,datum,norm,tau,h,error," +
  "order_local,blown_up,wall_seconds";

function tmpFile(name: string): string {
  return path.join(mkdtempSync(path.join(tmpdir(), "plots-")), name);
}

describe("parseStudyCsv", () => {
  it("parses the solver schema", () => {
    const rows = parseStudyCsv(readFileSync(FIXTURE, "utf-8"));
    expect(rows.length).toBeGreaterThan(0);
    expect(rows[0].norm).toBe("L2");
    expect(rows[0].tau).toBeCloseTo(0.01);
  });

  it("names the missing column", () => {
    const broken = HEADER.replace("order_local,", "") + "\n";
    expect(() => parseStudyCsv(broken)).toThrow(SchemaError);
    expect(() => parseStudyCsv(broken)).toThrow(/order_local/);
  });

  it("treats empty error cells as blown-up placeholders", () => {
    const text =
      HEADER + "\ns,ewi_efp,none,none,type1_h2,L2,0.01,0.0078125,,,37,0.100\n";
    const rows = parseStudyCsv(text);
    expect(rows[0].error).toBeNull();
    expect(rows[0].blown_up).toBe(37);
  });
});

describe("buildFigure", () => {
  it("returns null for a schema-valid file with zero series", () => {
    const rows = parseStudyCsv(HEADER + "\n");
    expect(
      buildFigure(rows, { xAxis: "tau", panels: ["L2", "H1"], guideSlopes: [1] })
    ).toBeNull();
  });

  it("renders one panel per norm with guide lines", () => {
    const rows = parseStudyCsv(readFileSync(FIXTURE, "utf-8"));
    const svg = buildFigure(rows, {
      xAxis: "tau",
      panels: ["L2", "H1"],
      guideSlopes: [1, 0.5],
    })!;
    expect(svg).toContain("L2-norm error");
    expect(svg).toContain("H1-norm error");
    expect(svg).toContain("slope 1");
    expect(svg).toContain("slope 0.5");
    expect((svg.match(/class="guide"/g) ?? []).length).toBeGreaterThan(0);
  });

  it("draws blown-up records as open markers at the floor", () => {
    const text =
      HEADER +
      "\ns,tsfp,none,none,type1_h2,L2,0.01,0.0078125,0.5,,,0.1" +
      "\ns,tsfp,none,none,type1_h2,L2,0.005,0.0078125,,,42,0.1\n";
    const svg = buildFigure(parseStudyCsv(text), {
      xAxis: "tau",
      panels: ["L2"],
      guideSlopes: [],
    })!;
    expect((svg.match(/class="blown"/g) ?? []).length).toBe(1);
  });
});

describe("render CLI", () => {
  it("is deterministic byte-for-byte on the same CSV (S1)", () => {
    const out1 = tmpFile("a.svg");
    const out2 = tmpFile("b.svg");
    const argv = ["--csv", FIXTURE, "--x", "tau", "--slopes", "1,0.5"];
    expect(main([...argv, "--out", out1])).toBe(0);
    expect(main([...argv, "--out", out2])).toBe(0);
    const a = readFileSync(out1);
    const b = readFileSync(out2);
    expect(a.equals(b)).toBe(true);
    const svg = a.toString();
    expect(svg).toContain("L2-norm error");
    expect(svg).toContain("H1-norm error");
    expect(svg).toContain("slope 1");
    expect(svg).toContain("slope 0.5");
  });

  it("exits 2 on schema mismatch", () => {
    const bad = tmpFile("bad.csv");
    writeFileSync(bad, "study_label,scheme\nx,y\n");
    const out = tmpFile("x.svg");
    expect(main(["--csv", bad, "--x", "tau", "--out", out])).toBe(2);
    expect(existsSync(out)).toBe(false);
  });

  it("warns and writes nothing for an empty CSV", () => {
    const empty = tmpFile("empty.csv");
    writeFileSync(empty, HEADER + "\n");
    const out = tmpFile("x.svg");
    expect(main(["--csv", empty, "--x", "tau", "--out", out])).toBe(0);
    expect(existsSync(out)).toBe(false);
  });

  it("rejects bad flags", () => {
    expect(main(["--csv", FIXTURE, "--x", "sideways", "--out", "o.svg"])).toBe(2);
    expect(main(["--nope"])).toBe(2);
  });
});

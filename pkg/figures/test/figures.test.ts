/**
 * Figure-renderer tests over the committed CSV fixtures in ../data
 * (regenerate with `python3 scripts/generate_figure_data.py --outdir
 * figures/data` from the repository root).
 *
 * The headline checks: the solved equal-modulus points sit within 0.5% of
 * both loci they are overlaid on (the circle |w| = target and their own
 * exponent's boundary curve), and the norm-growth figure carries the CSV
 * rows through to the SVG verbatim — the curves are reproduced from the
 * files, never recomputed.
 */

import { existsSync, mkdtempSync, readFileSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { fileURLToPath } from "node:url";
import { describe, expect, it } from "vitest";

import { col, metaNum, metaStr, parseTable, readTable } from "../src/csv.js";
import { render, type FigureSpec } from "../src/figures.js";
import { sx, sy, type Scale } from "../src/svg.js";
import { parseArgs } from "../src/cli.js";

const DATA = fileURLToPath(new URL("../data", import.meta.url));
const dataFile = (name: string) => join(DATA, name);
const outDir = mkdtempSync(join(tmpdir(), "figs-"));

const BOUNDARIES = [
  "spectrum_boundary_p1.2.csv",
  "spectrum_boundary_p1.5.csv",
  "spectrum_boundary_p2.csv",
  "spectrum_boundary_p1.66667.csv",
  "spectrum_boundary_p1.83333.csv",
].map(dataFile);

const NORMS = [
  "norm_growth_phi0_2inf.csv",
  "norm_growth_phi1_2inf.csv",
  "norm_growth_phi1_22.csv",
].map(dataFile);

function figureData(svg: string): {
  kind: string;
  scale: Scale;
  annotations: Record<string, string>;
  series: Array<{ source: string; label: string; header: string[]; rows: string[][] }>;
} {
  const m = svg.match(/<metadata id="figure-data">(.*?)<\/metadata>/s);
  expect(m, "embedded figure-data block").toBeTruthy();
  const unescaped = m![1]!.replace(/&lt;/g, "<").replace(/&gt;/g, ">").replace(/&amp;/g, "&");
  return JSON.parse(unescaped);
}

function polylines(svg: string): Array<Array<[number, number]>> {
  return [...svg.matchAll(/<polyline points="([^"]*)"/g)].map((m) =>
    m[1]!.split(" ").map((pt) => {
      const [x, y] = pt.split(",").map(Number);
      return [x!, y!] as [number, number];
    }),
  );
}

describe("spectrum_parabolas", () => {
  const spec: FigureSpec = {
    kind: "spectrum_parabolas",
    inputs: [dataFile("equal_modulus_pair.csv"), ...BOUNDARIES],
    output: join(outDir, "spectrum.svg"),
  };
  const svg = render(spec);
  const pair = readTable(dataFile("equal_modulus_pair.csv"));
  const target = metaNum(pair, "target_modulus");

  it("solved points lie on the circle |w| = target within 0.5%", () => {
    const re = col(pair, "Lambda_re");
    const im = col(pair, "Lambda_im");
    expect(re.length).toBe(2);
    for (let i = 0; i < re.length; i++) {
      const mod = Math.hypot(re[i]!, im[i]!);
      expect(Math.abs(mod - target) / target).toBeLessThan(0.005);
    }
  });

  it("each solved point lies on its own exponent's parabola within 0.5%", () => {
    const exps = col(pair, "exponent");
    const re = col(pair, "Lambda_re");
    const im = col(pair, "Lambda_im");
    for (let i = 0; i < exps.length; i++) {
      const curve = BOUNDARIES.map(readTable).find(
        (b) => Math.abs(metaNum(b, "p") - exps[i]!) < 1e-9,
      );
      expect(curve, `boundary CSV for exponent ${exps[i]}`).toBeTruthy();
      const bx = col(curve!, "re");
      const by = col(curve!, "im");
      let dist = Infinity;
      for (let k = 0; k + 1 < bx.length; k++) {
        // distance to the segment (bx[k],by[k])-(bx[k+1],by[k+1])
        const ax = bx[k]!, ay = by[k]!, ux = bx[k + 1]! - ax, uy = by[k + 1]! - ay;
        const tt = Math.max(0, Math.min(1,
          ((re[i]! - ax) * ux + (im[i]! - ay) * uy) / (ux * ux + uy * uy)));
        dist = Math.min(dist, Math.hypot(re[i]! - ax - tt * ux, im[i]! - ay - tt * uy));
      }
      const modulus = Math.hypot(re[i]!, im[i]!);
      expect(dist / modulus).toBeLessThan(0.005);
    }
  });

  it("overlays the markers at the transformed data coordinates", () => {
    const { scale } = figureData(svg);
    const re = col(pair, "Lambda_re");
    const im = col(pair, "Lambda_im");
    const markers = [...svg.matchAll(/<circle cx="([^"]*)" cy="([^"]*)" r="6.00"/g)];
    expect(markers.length).toBe(re.length);
    for (let i = 0; i < re.length; i++) {
      expect(markers[i]![1]).toBe(sx(scale, re[i]!).toFixed(2));
      expect(markers[i]![2]).toBe(sy(scale, im[i]!).toFixed(2));
    }
  });

  it("draws one curve per boundary CSV plus the circle, annotated from metadata", () => {
    expect(polylines(svg).length).toBe(BOUNDARIES.length);
    expect(svg).toContain("<ellipse");
    expect(svg).toContain(`|w| = ${metaStr(pair, "target_modulus")}`);
    for (const b of BOUNDARIES) {
      expect(svg).toContain(`p=${metaStr(readTable(b), "p")}`);
    }
  });

  it("writes the SVG file and renders byte-identically on rerun", () => {
    expect(existsSync(spec.output)).toBe(true);
    expect(readFileSync(spec.output, "utf-8")).toBe(svg);
    expect(render({ ...spec, output: join(outDir, "spectrum2.svg") })).toBe(svg);
  });
});

describe("norm_growth", () => {
  const spec: FigureSpec = {
    kind: "norm_growth",
    inputs: NORMS,
    output: join(outDir, "norms.svg"),
  };
  const svg = render(spec);

  it("carries every CSV row into the figure verbatim (no recomputation)", () => {
    const { series } = figureData(svg);
    expect(series.length).toBe(NORMS.length);
    NORMS.forEach((path, i) => {
      const t = readTable(path);
      expect(series[i]!.header).toEqual(t.header);
      expect(series[i]!.rows).toEqual(t.raw);
    });
  });

  it("plots each schedule at exactly the transformed CSV values", () => {
    const { scale } = figureData(svg);
    const lines = polylines(svg);
    expect(lines.length).toBe(NORMS.length);
    NORMS.forEach((path, i) => {
      const t = readTable(path);
      const R = col(t, "R");
      const v = col(t, "value");
      expect(lines[i]!.length).toBe(R.length);
      R.forEach((r, k) => {
        expect(lines[i]![k]![0]).toBeCloseTo(sx(scale, r), 2);
        expect(lines[i]![k]![1]).toBeCloseTo(sy(scale, v[k]!), 2);
      });
    });
  });

  it("shows the growing / flattening shapes the schedules contain", () => {
    // growing weak-type curve: value at R=40 at least 1.2x the value at R=10
    const grow = readTable(dataFile("norm_growth_phi0_2inf.csv"));
    const R = col(grow, "R");
    const v = col(grow, "value");
    const at = (r: number) => v[R.findIndex((x) => Math.abs(x - r) < 1e-9)]!;
    expect(at(40) / at(10)).toBeGreaterThan(1.2);
    // flat weak-type curve: last two schedule points within 1%
    const flat = readTable(dataFile("norm_growth_phi1_2inf.csv"));
    const f = col(flat, "value");
    expect(Math.abs(f[f.length - 1]! / f[f.length - 2]! - 1)).toBeLessThan(0.01);
    // and the figure legend names both, copied from metadata
    expect(svg).toContain("lambda=(0.0, 0.0)");
    expect(svg).toContain("lambda=(1.0, 0.0)");
  });
});

describe("roe_bars", () => {
  const spec: FigureSpec = {
    kind: "roe_bars",
    inputs: [dataFile("roe_pair_perk.csv")],
    output: join(outDir, "roe.svg"),
  };
  const svg = render(spec);

  it("draws one bar per k and copies the verdict annotation", () => {
    const t = readTable(dataFile("roe_pair_perk.csv"));
    const bars = [...svg.matchAll(/<rect [^>]*fill="#1f77b4"/g)];
    expect(bars.length).toBe(t.rows.length);
    expect(svg).toContain(`verdict=${metaStr(t, "verdict")}`);
  });

  it("renders the one-sided backward-growth chart too", () => {
    const out = join(outDir, "roe-onesided.svg");
    const one = render({ kind: "roe_bars", inputs: [dataFile("roe_onesided_perk.csv")], output: out });
    const t = readTable(dataFile("roe_onesided_perk.csv"));
    const v = col(t, "value");
    const k = col(t, "k");
    // k = -10 value dwarfs k = -1 (growth the chart exists to display)
    expect(v[k.indexOf(-10)]! / v[k.indexOf(-1)]!).toBeGreaterThan(10);
    expect(one).toContain("verdict=unbounded");
  });
});

describe("input validation", () => {
  it("rejects an empty CSV and writes no file", () => {
    const empty = join(outDir, "empty.csv");
    writeFileSync(empty, "# space=H3\nR,value\n");
    const out = join(outDir, "should-not-exist.svg");
    expect(() => render({ kind: "norm_growth", inputs: [empty], output: out })).toThrow(/empty CSV/);
    expect(existsSync(out)).toBe(false);
  });

  it("rejects a CSV with the wrong columns", () => {
    const bad = join(outDir, "bad.csv");
    writeFileSync(bad, "# verdict=x\na,b\n1,2\n");
    expect(() =>
      render({ kind: "norm_growth", inputs: [bad], output: join(outDir, "x.svg") }),
    ).toThrow(/missing column 'R'/);
  });

  it("rejects a missing file before writing output", () => {
    const out = join(outDir, "y.svg");
    expect(() =>
      render({ kind: "roe_bars", inputs: [join(outDir, "nope.csv")], output: out }),
    ).toThrow();
    expect(existsSync(out)).toBe(false);
  });

  it("parses metadata and numeric rows from artifact text", () => {
    const t = parseTable("# a=1\n# b=two\nx,y\n1,2\n3,4\n");
    expect(t.meta).toEqual({ a: "1", b: "two" });
    expect(col(t, "y")).toEqual([2, 4]);
    expect(() => col(t, "z")).toThrow(/missing column/);
  });

  it("command-line parsing covers the three kinds and rejects junk", () => {
    const spec = parseArgs(["roe_bars", "--in", "a.csv", "--out", "b.svg"]);
    expect(spec).toEqual({ kind: "roe_bars", inputs: ["a.csv"], output: "b.svg", title: undefined });
    expect(() => parseArgs(["nope", "--in", "a", "--out", "b"])).toThrow(/first argument/);
    expect(() => parseArgs(["norm_growth", "--in", "a.csv"])).toThrow(/--out/);
    expect(() => parseArgs(["norm_growth", "--out", "b.svg"])).toThrow(/--in/);
  });
});

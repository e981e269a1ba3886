/**
 * Figure renderers over the toolkit's CSV artifacts.
 *
 * Three kinds: nested spectrum-boundary parabolas with the equal-modulus
 * circle and solved points overlaid; truncated-norm growth curves; per-k
 * power-sequence bar charts.  Rendering is read-only over the CSVs — every
 * number drawn or annotated is copied from the files, nothing is recomputed
 * — and each SVG embeds a machine-readable block with the plotted rows and
 * the data-to-screen transform, so the figure itself documents exactly what
 * it shows.
 */

import { writeFileSync } from "node:fs";
import { basename } from "node:path";

import { col, metaStr, readTable, requireRows, type Table } from "./csv.js";
import { Scale, Svg, sx, sy } from "./svg.js";

export type FigureKind = "spectrum_parabolas" | "norm_growth" | "roe_bars";

export interface FigureSpec {
  kind: FigureKind;
  /** CSV artifact paths; meaning depends on the kind. */
  inputs: string[];
  output: string;
  title?: string;
}

const WIDTH = 640;
const HEIGHT = 480;
const PLOT = { x: 60, y: 40, w: WIDTH - 90, h: HEIGHT - 100 };
const PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#8c564b", "#e377c2"];

interface SeriesDump {
  source: string;
  label: string;
  header: string[];
  rows: string[][];
}

function pad(lo: number, hi: number, frac = 0.08): [number, number] {
  const span = hi - lo || 1;
  return [lo - frac * span, hi + frac * span];
}

function extent(values: number[]): [number, number] {
  let lo = Infinity;
  let hi = -Infinity;
  for (const v of values) {
    if (v < lo) lo = v;
    if (v > hi) hi = v;
  }
  return [lo, hi];
}

function zeroLines(g: Svg, s: Scale): void {
  if (s.domX[0] < 0 && s.domX[1] > 0) {
    g.line(sx(s, 0), s.plot.y, sx(s, 0), s.plot.y + s.plot.h, "#ddd");
  }
  if (s.domY[0] < 0 && s.domY[1] > 0) {
    g.line(s.plot.x, sy(s, 0), s.plot.x + s.plot.w, sy(s, 0), "#ddd");
  }
}

// ---------------------------------------------------------------------------
// spectrum parabolas + equal-modulus circle + solved points

function isBoundary(t: Table): boolean {
  return t.header.join(",") === "alpha,re,im";
}

function isPairTable(t: Table): boolean {
  return t.header.includes("exponent") && t.header.includes("Lambda_re");
}

function renderSpectrum(tables: Table[], title: string): string {
  const boundaries = tables.filter(isBoundary);
  const pairs = tables.filter(isPairTable);
  if (boundaries.length === 0) throw new Error("spectrum_parabolas needs boundary CSVs (alpha,re,im)");
  if (pairs.length !== 1) throw new Error("spectrum_parabolas needs exactly one solved-pair CSV");
  const pair = pairs[0]!;
  const target = metaStr(pair, "target_modulus");
  const radius = Number(target);

  const allRe = boundaries.flatMap((b) => col(b, "re")).concat(col(pair, "Lambda_re"), [-radius, radius]);
  const allIm = boundaries.flatMap((b) => col(b, "im")).concat(col(pair, "Lambda_im"), [-radius, radius]);
  const scale: Scale = { domX: pad(...extent(allRe)), domY: pad(...extent(allIm)), plot: PLOT };

  const g = new Svg(WIDTH, HEIGHT);
  const series: SeriesDump[] = [];
  g.text(WIDTH / 2, 22, title, { anchor: "middle", size: 14 });
  zeroLines(g, scale);
  g.axes(scale, "Re w", "Im w");

  boundaries.forEach((b, i) => {
    const color = PALETTE[i % PALETTE.length]!;
    const re = col(b, "re");
    const im = col(b, "im");
    const pts = re.map((x, k) => [sx(scale, x), sy(scale, im[k]!)] as [number, number]);
    g.polyline(pts, color);
    const label = `p=${metaStr(b, "p")}`;
    g.text(pts[0]![0] + 4, pts[0]![1] - 4, label, { fill: color });
    series.push({ source: basename(b.path), label, header: b.header, rows: b.raw });
  });

  // the equal-modulus locus |w| = target, an ellipse after the affine map
  const rx = (radius / (scale.domX[1] - scale.domX[0])) * PLOT.w;
  const ry = (radius / (scale.domY[1] - scale.domY[0])) * PLOT.h;
  g.ellipse(sx(scale, 0), sy(scale, 0), rx, ry, "#555", "5,3");
  g.text(sx(scale, 0), sy(scale, radius) - 8, `|w| = ${target}`, { anchor: "middle" });

  const wRe = col(pair, "Lambda_re");
  const wIm = col(pair, "Lambda_im");
  wRe.forEach((x, k) => g.marker(sx(scale, x), sy(scale, wIm[k]!), "#000"));
  series.push({ source: basename(pair.path), label: "solved pair", header: pair.header, rows: pair.raw });

  g.metadata({
    kind: "spectrum_parabolas",
    scale,
    annotations: { target_modulus: target, q: metaStr(pair, "q"), r: metaStr(pair, "r") },
    series,
  });
  return g.render();
}

// ---------------------------------------------------------------------------
// truncated-norm growth schedules

function renderNormGrowth(tables: Table[], title: string): string {
  if (tables.length === 0) throw new Error("norm_growth needs at least one schedule CSV");
  const rs = tables.flatMap((t) => col(t, "R"));
  const vals = tables.flatMap((t) => col(t, "value"));
  const scale: Scale = { domX: pad(...extent(rs), 0.04), domY: [0, pad(...extent(vals))[1]], plot: PLOT };

  const g = new Svg(WIDTH, HEIGHT);
  const series: SeriesDump[] = [];
  g.text(WIDTH / 2, 22, title, { anchor: "middle", size: 14 });
  g.axes(scale, "truncation R", "norm value");

  tables.forEach((t, i) => {
    const color = PALETTE[i % PALETTE.length]!;
    const R = col(t, "R");
    const v = col(t, "value");
    const pts = R.map((x, k) => [sx(scale, x), sy(scale, v[k]!)] as [number, number]);
    g.polyline(pts, color);
    const label =
      `lambda=(${metaStr(t, "lambda_re")}, ${metaStr(t, "lambda_im")})` +
      `  p=${metaStr(t, "p")} q=${metaStr(t, "q")}`;
    g.text(PLOT.x + 10, PLOT.y + 16 * (i + 1), label, { fill: color });
    series.push({ source: basename(t.path), label, header: t.header, rows: t.raw });
  });

  g.metadata({ kind: "norm_growth", scale, annotations: {}, series });
  return g.render();
}

// ---------------------------------------------------------------------------
// per-k power-sequence bars

function renderRoeBars(tables: Table[], title: string): string {
  if (tables.length !== 1) throw new Error("roe_bars takes exactly one per-k CSV");
  const t = tables[0]!;
  const ks = col(t, "k");
  const vals = col(t, "value");
  const scale: Scale = {
    domX: [ks[0]! - 0.5, ks[ks.length - 1]! + 0.5],
    domY: [0, pad(0, extent(vals)[1])[1]],
    plot: PLOT,
  };

  const g = new Svg(WIDTH, HEIGHT);
  g.text(WIDTH / 2, 22, title, { anchor: "middle", size: 14 });
  g.axes(scale, "k", "functional value");

  const slot = PLOT.w / ks.length;
  const barW = 0.7 * slot;
  const y0 = sy(scale, 0);
  ks.forEach((k, i) => {
    const xc = sx(scale, k);
    const yTop = sy(scale, vals[i]!);
    g.rect(xc - barW / 2, yTop, barW, y0 - yTop, "#1f77b4");
  });
  const note = `verdict=${metaStr(t, "verdict")}  preset=${metaStr(t, "preset")}  norm=${metaStr(t, "norm")}`;
  g.text(PLOT.x + 10, PLOT.y + 16, note);

  g.metadata({
    kind: "roe_bars",
    scale,
    annotations: { verdict: metaStr(t, "verdict"), z_re: metaStr(t, "z_re"), R: metaStr(t, "R") },
    series: [{ source: basename(t.path), label: "per-k", header: t.header, rows: t.raw }],
  });
  return g.render();
}

// ---------------------------------------------------------------------------

export function render(spec: FigureSpec): string {
  // read and validate every input before any output exists
  const tables = spec.inputs.map((p) => requireRows(readTable(p)));
  const title = spec.title ?? spec.kind;
  let svg: string;
  switch (spec.kind) {
    case "spectrum_parabolas":
      svg = renderSpectrum(tables, title);
      break;
    case "norm_growth":
      svg = renderNormGrowth(tables, title);
      break;
    case "roe_bars":
      svg = renderRoeBars(tables, title);
      break;
    default:
      throw new Error(`unknown figure kind: ${(spec as FigureSpec).kind}`);
  }
  writeFileSync(spec.output, svg, "utf-8");
  return svg;
}

#!/usr/bin/env node
/**
 * One figure per invocation:
 *
 *   node dist/cli.js <kind> --in a.csv [--in b.csv ...] --out figure.svg [--title text]
 *
 * kinds: spectrum_parabolas | norm_growth | roe_bars
 */

import { render, type FigureKind, type FigureSpec } from "./figures.js";

const KINDS: FigureKind[] = ["spectrum_parabolas", "norm_growth", "roe_bars"];

export function parseArgs(argv: string[]): FigureSpec {
  const [kind, ...rest] = argv;
  if (!kind || !KINDS.includes(kind as FigureKind)) {
    throw new Error(`first argument must be one of: ${KINDS.join(", ")}`);
  }
  const inputs: string[] = [];
  let output: string | undefined;
  let title: string | undefined;
  for (let i = 0; i < rest.length; i += 2) {
    const flag = rest[i];
    const val = rest[i + 1];
    if (val === undefined) throw new Error(`flag ${flag} needs a value`);
    if (flag === "--in") inputs.push(val);
    else if (flag === "--out") output = val;
    else if (flag === "--title") title = val;
    else throw new Error(`unknown flag: ${flag}`);
  }
  if (inputs.length === 0) throw new Error("at least one --in CSV is required");
  if (!output) throw new Error("--out is required");
  return { kind: kind as FigureKind, inputs, output, title };
}

function main(): number {
  try {
    const spec = parseArgs(process.argv.slice(2));
    render(spec);
    console.log(spec.output);
    return 0;
  } catch (err) {
    console.error(String(err instanceof Error ? err.message : err));
    return 1;
  }
}

if (import.meta.url === `file://${process.argv[1]}`) {
  process.exitCode = main();
}

/**
 * Minimal deterministic SVG assembly: fixed canvas, fixed precision, no
 * timestamps or generator tags, text in the default font.  Rendering the
 * same inputs twice yields identical bytes.
 */

export interface Rect {
  x: number;
  y: number;
  w: number;
  h: number;
}

export interface Scale {
  domX: [number, number];
  domY: [number, number];
  plot: Rect;
}

/** Screen coordinates at fixed 2-decimal precision. */
export const px = (v: number): string => v.toFixed(2);

export function sx(s: Scale, x: number): number {
  return s.plot.x + ((x - s.domX[0]) / (s.domX[1] - s.domX[0])) * s.plot.w;
}

export function sy(s: Scale, y: number): number {
  return s.plot.y + s.plot.h - ((y - s.domY[0]) / (s.domY[1] - s.domY[0])) * s.plot.h;
}

export function xmlEscape(text: string): string {
  return text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

/** Round tick positions on a 1-2-5 ladder covering [lo, hi]. */
export function niceTicks(lo: number, hi: number, target = 5): number[] {
  if (!(hi > lo)) return [lo];
  const rawStep = (hi - lo) / target;
  const mag = Math.pow(10, Math.floor(Math.log10(rawStep)));
  let step = mag;
  for (const m of [1, 2, 5, 10]) {
    if (mag * m >= rawStep) {
      step = mag * m;
      break;
    }
  }
  const ticks: number[] = [];
  for (let t = Math.ceil(lo / step) * step; t <= hi + 1e-9 * step; t += step) {
    ticks.push(Math.abs(t) < 1e-12 ? 0 : t);
  }
  return ticks;
}

export class Svg {
  private parts: string[] = [];

  constructor(
    readonly width: number,
    readonly height: number,
  ) {}

  line(x1: number, y1: number, x2: number, y2: number, stroke: string, width = 1): void {
    this.parts.push(
      `<line x1="${px(x1)}" y1="${px(y1)}" x2="${px(x2)}" y2="${px(y2)}" ` +
        `stroke="${stroke}" stroke-width="${width}"/>`,
    );
  }

  polyline(pts: Array<[number, number]>, stroke: string, width = 1.5): void {
    const d = pts.map(([x, y]) => `${px(x)},${px(y)}`).join(" ");
    this.parts.push(
      `<polyline points="${d}" fill="none" stroke="${stroke}" stroke-width="${width}"/>`,
    );
  }

  ellipse(cx: number, cy: number, rx: number, ry: number, stroke: string, dash?: string): void {
    const extra = dash ? ` stroke-dasharray="${dash}"` : "";
    this.parts.push(
      `<ellipse cx="${px(cx)}" cy="${px(cy)}" rx="${px(rx)}" ry="${px(ry)}" ` +
        `fill="none" stroke="${stroke}" stroke-width="1.5"${extra}/>`,
    );
  }

  rect(x: number, y: number, w: number, h: number, fill: string): void {
    this.parts.push(
      `<rect x="${px(x)}" y="${px(y)}" width="${px(w)}" height="${px(h)}" fill="${fill}"/>`,
    );
  }

  /** Cross marker, drawn on top of curves so overlays stay visible. */
  marker(x: number, y: number, color: string, r = 4): void {
    this.line(x - r, y - r, x + r, y + r, color, 1.5);
    this.line(x - r, y + r, x + r, y - r, color, 1.5);
    this.parts.push(
      `<circle cx="${px(x)}" cy="${px(y)}" r="${px(r + 2)}" fill="none" ` +
        `stroke="${color}" stroke-width="1"/>`,
    );
  }

  text(x: number, y: number, s: string, opts: { anchor?: string; size?: number; fill?: string } = {}): void {
    const anchor = opts.anchor ?? "start";
    const size = opts.size ?? 11;
    const fill = opts.fill ?? "#333";
    this.parts.push(
      `<text x="${px(x)}" y="${px(y)}" font-size="${size}" text-anchor="${anchor}" ` +
        `fill="${fill}">${xmlEscape(s)}</text>`,
    );
  }

  metadata(payload: unknown): void {
    this.parts.push(`<metadata id="figure-data">${xmlEscape(JSON.stringify(payload))}</metadata>`);
  }

  axes(s: Scale, xLabel: string, yLabel: string): void {
    const { plot } = s;
    this.line(plot.x, plot.y + plot.h, plot.x + plot.w, plot.y + plot.h, "#444");
    this.line(plot.x, plot.y, plot.x, plot.y + plot.h, "#444");
    for (const t of niceTicks(s.domX[0], s.domX[1])) {
      const x = sx(s, t);
      this.line(x, plot.y + plot.h, x, plot.y + plot.h + 4, "#444");
      this.text(x, plot.y + plot.h + 16, String(t), { anchor: "middle" });
    }
    for (const t of niceTicks(s.domY[0], s.domY[1])) {
      const y = sy(s, t);
      this.line(plot.x - 4, y, plot.x, y, "#444");
      this.text(plot.x - 7, y + 3.5, String(t), { anchor: "end" });
    }
    this.text(plot.x + plot.w / 2, plot.y + plot.h + 32, xLabel, { anchor: "middle", size: 12 });
    this.text(plot.x + 4, plot.y - 8, yLabel, { size: 12 });
  }

  render(): string {
    return (
      `<svg xmlns="http://www.w3.org/2000/svg" width="${this.width}" height="${this.height}" ` +
      `viewBox="0 0 ${this.width} ${this.height}">\n` +
      `<rect x="0" y="0" width="${this.width}" height="${this.height}" fill="white"/>\n` +
      this.parts.join("\n") +
      `\n</svg>\n`
    );
  }
}

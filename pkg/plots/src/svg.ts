/** Minimal SVG chart builder: axes, tick labels, polyline series, legend. */

export interface Series {
  name: string;
  xs: number[];
  ys: number[];
  color: string;
  dashed?: boolean;
}

export interface ChartOptions {
  width?: number;
  height?: number;
  logX?: boolean;
  logY?: boolean;
  title?: string;
  xLabel?: string;
  yLabel?: string;
}

const MARGIN = { left: 64, right: 24, top: 36, bottom: 48 };

function escapeXml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

class Scale {
  constructor(
    private lo: number,
    private hi: number,
    private outLo: number,
    private outHi: number,
    private log: boolean
  ) {
    if (log && lo <= 0) {
      throw new Error("log scale needs strictly positive values");
    }
  }

  map(value: number): number {
    const [a, b] = this.log
      ? [Math.log(this.lo), Math.log(this.hi)]
      : [this.lo, this.hi];
    const v = this.log ? Math.log(value) : value;
    const t = b === a ? 0.5 : (v - a) / (b - a);
    return this.outLo + t * (this.outHi - this.outLo);
  }

  ticks(count: number): number[] {
    const out: number[] = [];
    if (this.log) {
      const lo = Math.ceil(Math.log10(this.lo));
      const hi = Math.floor(Math.log10(this.hi));
      for (let e = lo; e <= hi; e += 1) out.push(10 ** e);
      if (out.length === 0) out.push(this.lo, this.hi);
    } else {
      for (let i = 0; i <= count; i += 1) {
        out.push(this.lo + ((this.hi - this.lo) * i) / count);
      }
    }
    return out;
  }
}

function formatTick(value: number): string {
  if (value === 0) return "0";
  const abs = Math.abs(value);
  if (abs >= 10000 || abs < 0.01) return value.toExponential(0);
  return Number(value.toPrecision(3)).toString();
}

export function renderChart(series: Series[], options: ChartOptions = {}): string {
  if (series.length === 0 || series.every((s) => s.xs.length === 0)) {
    throw new Error("nothing to plot");
  }
  const width = options.width ?? 720;
  const height = options.height ?? 480;
  const xs = series.flatMap((s) => s.xs);
  const ys = series.flatMap((s) => s.ys);
  const eps = 1e-9;
  const yPositive = ys.filter((y) => y > 0);
  const xScale = new Scale(
    Math.min(...xs),
    Math.max(...xs) + eps,
    MARGIN.left,
    width - MARGIN.right,
    options.logX ?? false
  );
  const yLo = options.logY ? Math.min(...yPositive) : Math.min(0, ...ys);
  const yScale = new Scale(
    yLo,
    Math.max(...ys) * 1.05 + eps,
    height - MARGIN.bottom,
    MARGIN.top,
    options.logY ?? false
  );

  const parts: string[] = [];
  parts.push('<?xml version="1.0" encoding="UTF-8"?>');
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" ` +
      `viewBox="0 0 ${width} ${height}" font-family="sans-serif" font-size="12">`
  );
  parts.push(`<rect width="${width}" height="${height}" fill="white"/>`);
  if (options.title) {
    parts.push(
      `<text x="${width / 2}" y="20" text-anchor="middle" font-size="14">` +
        `${escapeXml(options.title)}</text>`
    );
  }

  const axisY = height - MARGIN.bottom;
  parts.push(
    `<line x1="${MARGIN.left}" y1="${axisY}" x2="${width - MARGIN.right}" ` +
      `y2="${axisY}" stroke="black"/>`
  );
  parts.push(
    `<line x1="${MARGIN.left}" y1="${MARGIN.top}" x2="${MARGIN.left}" ` +
      `y2="${axisY}" stroke="black"/>`
  );
  for (const tick of xScale.ticks(6)) {
    const x = xScale.map(tick);
    parts.push(`<line x1="${x}" y1="${axisY}" x2="${x}" y2="${axisY + 5}" stroke="black"/>`);
    parts.push(
      `<text x="${x}" y="${axisY + 18}" text-anchor="middle">${formatTick(tick)}</text>`
    );
  }
  for (const tick of yScale.ticks(6)) {
    const y = yScale.map(tick);
    parts.push(`<line x1="${MARGIN.left - 5}" y1="${y}" x2="${MARGIN.left}" y2="${y}" stroke="black"/>`);
    parts.push(
      `<text x="${MARGIN.left - 8}" y="${y + 4}" text-anchor="end">${formatTick(tick)}</text>`
    );
  }
  if (options.xLabel) {
    parts.push(
      `<text x="${(MARGIN.left + width - MARGIN.right) / 2}" y="${height - 10}" ` +
        `text-anchor="middle">${escapeXml(options.xLabel)}</text>`
    );
  }
  if (options.yLabel) {
    parts.push(
      `<text x="16" y="${(MARGIN.top + axisY) / 2}" text-anchor="middle" ` +
        `transform="rotate(-90 16 ${(MARGIN.top + axisY) / 2})">` +
        `${escapeXml(options.yLabel)}</text>`
    );
  }

  series.forEach((s) => {
    const points = s.xs
      .map((x, i) => `${xScale.map(x).toFixed(2)},${yScale.map(s.ys[i]).toFixed(2)}`)
      .join(" ");
    const dash = s.dashed ? ' stroke-dasharray="6 4"' : "";
    parts.push(
      `<polyline fill="none" stroke="${s.color}" stroke-width="1.5"${dash} ` +
        `points="${points}" data-series="${escapeXml(s.name)}"/>`
    );
  });

  series.forEach((s, i) => {
    const y = MARGIN.top + 14 * i;
    const x = width - MARGIN.right - 170;
    const dash = s.dashed ? ' stroke-dasharray="6 4"' : "";
    parts.push(`<line x1="${x}" y1="${y}" x2="${x + 22}" y2="${y}" stroke="${s.color}"${dash}/>`);
    parts.push(`<text x="${x + 28}" y="${y + 4}">${escapeXml(s.name)}</text>`);
  });

  parts.push("</svg>");
  return parts.join("\n");
}

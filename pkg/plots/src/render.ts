/** Chart assembly for the two harness CSV schemas.
 *
 * Pure consumer: the same CSV bytes always produce the same SVG text, and no
 * game quantities are recomputed here -- both the measurements and the
 * reference-bound columns come straight from the file.
 */

import {
  CURVE_SCHEMA,
  SWEEP_SCHEMA,
  SchemaError,
  column,
  numericColumn,
  parseResultCsv,
} from "./csv.js";
import { ChartOptions, Series, renderChart } from "./svg.js";

export interface RenderOptions extends ChartOptions {
  /** Subset of series names to draw (default: all). */
  series?: string[];
}

const PALETTE = ["#1f6fb2", "#d1495b", "#3a7d44", "#7a5195"];

function pick(series: Series[], wanted?: string[]): Series[] {
  if (!wanted || wanted.length === 0) return series;
  const out = series.filter((s) => wanted.includes(s.name));
  if (out.length === 0) {
    throw new SchemaError(
      `no series left after filtering; available: ${series.map((s) => s.name).join(", ")}`
    );
  }
  return out;
}

export function renderCurveCsv(text: string, options: RenderOptions = {}): string {
  const table = parseResultCsv(text);
  if (table.schema !== CURVE_SCHEMA) {
    throw new SchemaError(
      `expected schema ${CURVE_SCHEMA}, got ${table.schema}`
    );
  }
  const ts = numericColumn(table, "t");
  const measured = numericColumn(table, "measured_backlog");
  const bound = numericColumn(table, "bound_b_of_t");
  const strategies = [...new Set(column(table, "strategy"))].join(", ");
  const series: Series[] = [
    { name: `measured (${strategies})`, xs: ts, ys: measured, color: PALETTE[0] },
    { name: "b(t) bound", xs: ts, ys: bound, color: PALETTE[1], dashed: true },
  ];
  const chosen = pick(series, options.series);
  return renderChart(chosen, {
    title: options.title ?? "backlog vs time",
    xLabel: "rounds t",
    yLabel: "backlog",
    ...options,
  });
}

export function renderSweepCsv(text: string, options: RenderOptions = {}): string {
  const table = parseResultCsv(text);
  if (table.schema !== SWEEP_SCHEMA) {
    throw new SchemaError(
      `expected schema ${SWEEP_SCHEMA}, got ${table.schema}`
    );
  }
  const status = column(table, "status");
  const keep = (values: number[]) => values.filter((_, i) => status[i] === "ok");
  const ks = keep(numericColumn(table, "k"));
  if (ks.length === 0) {
    throw new SchemaError("sweep CSV has no successful rows to plot");
  }
  const rounds = keep(numericColumn(table, "rounds_used"));
  const reference = keep(numericColumn(table, "bound_t_of_k"));
  const series: Series[] = [
    { name: "rounds used", xs: ks, ys: rounds, color: PALETTE[0] },
    { name: "t(b) reference", xs: ks, ys: reference, color: PALETTE[2], dashed: true },
  ];
  const chosen = pick(series, options.series);
  return renderChart(chosen, {
    title: options.title ?? "rounds vs backlog target",
    xLabel: "target k",
    yLabel: "rounds",
    ...options,
  });
}

/** Render any known cupgames CSV, dispatching on its schema marker. */
export function renderCsv(text: string, options: RenderOptions = {}): string {
  const table = parseResultCsv(text);
  if (table.schema === CURVE_SCHEMA) return renderCurveCsv(text, options);
  return renderSweepCsv(text, options);
}

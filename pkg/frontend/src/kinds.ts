import * as path from "node:path";

import { numbers, readTable, Table } from "./csv";
import { DataError, SchemaError } from "./errors";
import { FigureOptions, renderFigure, Series } from "./figure";

export interface RenderOptions {
  norm?: "l_inf" | "l_1";
  columns?: string[];
  title?: string;
  width?: number;
  height?: number;
}

export interface KindDef {
  summary: string;
  render(inputs: string[], options: RenderOptions): string;
}

function sizing(options: RenderOptions): Pick<FigureOptions, "width" | "height"> {
  return { width: options.width, height: options.height };
}

function onlyInput(inputs: string[], kind: string): string {
  if (inputs.length !== 1) {
    throw new DataError(`${kind} takes exactly one input CSV, got ${inputs.length}`);
  }
  return inputs[0] as string;
}

/** Label per input file; falls back to parent/name when basenames collide. */
function seriesLabels(inputs: string[]): Map<string, string> {
  const base = (p: string) => path.basename(p, ".csv");
  const counts = new Map<string, number>();
  for (const p of inputs) {
    counts.set(base(p), (counts.get(base(p)) ?? 0) + 1);
  }
  const labels = new Map<string, string>();
  for (const p of inputs) {
    const name = base(p);
    labels.set(
      p,
      (counts.get(name) ?? 0) > 1 ? `${path.basename(path.dirname(p))}/${name}` : name,
    );
  }
  return labels;
}

function positivePairs(
  xs: number[],
  ys: number[],
  keep: (x: number, y: number) => boolean,
): { x: number[]; y: number[] } {
  const x: number[] = [];
  const y: number[] = [];
  for (let i = 0; i < xs.length; i += 1) {
    const xi = xs[i] as number;
    const yi = ys[i] as number;
    if (keep(xi, yi)) {
      x.push(xi);
      y.push(yi);
    }
  }
  return { x, y };
}

function shortNumber(value: number): string {
  return String(Number(value.toPrecision(3)));
}

function renderFilterProfile(inputs: string[], options: RenderOptions): string {
  const table = readTable(onlyInput(inputs, "filter-profile"), ["x", "rho_sharp", "rho_smooth"]);
  const x = numbers(table, "x");
  const series: Series[] = [
    { label: "sharp23", x, y: numbers(table, "rho_sharp") },
    { label: "smooth36", x, y: numbers(table, "rho_smooth") },
  ];
  return renderFigure(series, {
    ...sizing(options),
    title: options.title ?? "Dealiasing filter profiles",
    xLabel: "x = |k| / k_max",
    yLabel: "rho(x)",
    markers: [{ axis: "x", value: 2 / 3, label: "x = 2/3" }],
  });
}

function renderErrors(inputs: string[], options: RenderOptions): string {
  const norm = options.norm ?? "l_inf";
  const groups = new Map<string, { t: number[]; y: number[] }>();
  for (const input of inputs) {
    const table = readTable(input, ["t", "N", "filter", norm]);
    const t = numbers(table, "t");
    const y = numbers(table, norm);
    table.rows.forEach((row, i) => {
      const key = `${row["filter"]} N=${row["N"]}`;
      const group = groups.get(key) ?? { t: [], y: [] };
      const yi = y[i] as number;
      if (yi > 0) {
        group.t.push(t[i] as number);
        group.y.push(yi);
      }
      groups.set(key, group);
    });
  }
  const series: Series[] = [];
  for (const [label, g] of groups) {
    const order = g.t.map((_, i) => i).sort((a, b) => (g.t[a] as number) - (g.t[b] as number));
    series.push({
      label,
      x: order.map((i) => g.t[i] as number),
      y: order.map((i) => g.y[i] as number),
      dots: true,
    });
  }
  return renderFigure(series, {
    ...sizing(options),
    title: options.title ?? `Burgers error vs time (${norm})`,
    xLabel: "t",
    yLabel: norm,
    yScale: "log",
  });
}

function renderPointwise(inputs: string[], options: RenderOptions): string {
  const labels = seriesLabels(inputs);
  const series: Series[] = inputs.map((input) => {
    const table = readTable(input, ["x", "error"]);
    const kept = positivePairs(numbers(table, "x"), numbers(table, "error"), (_, e) => e > 0);
    if (kept.x.length === 0) {
      throw new DataError(`${input}: no positive error values to draw on a log axis`);
    }
    return { label: labels.get(input) as string, ...kept };
  });
  return renderFigure(series, {
    ...sizing(options),
    title: options.title ?? "Pointwise error",
    xLabel: "x",
    yLabel: "|error|",
    yScale: "log",
  });
}

function renderSpectrum(inputs: string[], options: RenderOptions): string {
  const labels = seriesLabels(inputs);
  const series: Series[] = [];
  let oracle: Series | null = null;
  for (const input of inputs) {
    const table = readTable(input, ["k", "modulus", "oracle_modulus"]);
    const k = numbers(table, "k");
    const kept = positivePairs(k, numbers(table, "modulus"), (_, m) => m > 0);
    if (kept.x.length === 0) {
      throw new DataError(`${input}: no positive moduli to draw on a log axis`);
    }
    series.push({ label: labels.get(input) as string, ...kept });
    if (oracle === null) {
      const ref = positivePairs(k, numbers(table, "oracle_modulus"), (_, m) => m > 0);
      if (ref.x.length > 0) {
        oracle = { label: "oracle", ...ref, dashed: true, color: "#444444" };
      }
    }
  }
  if (oracle !== null) {
    series.push(oracle);
  }
  return renderFigure(series, {
    ...sizing(options),
    title: options.title ?? "Spectrum vs oracle",
    xLabel: "k",
    yLabel: "|u_k|",
    yScale: "log",
  });
}

function renderShellSpectrum(inputs: string[], options: RenderOptions): string {
  const labels = seriesLabels(inputs);
  const series: Series[] = inputs.map((input) => {
    const table = readTable(input, ["k"]);
    const value = ["E", "Z"].find((c) => table.columns.includes(c));
    if (value === undefined) {
      throw new SchemaError(`${input}: missing column "E" or "Z"`);
    }
    const kept = positivePairs(
      numbers(table, "k"),
      numbers(table, value),
      (k, v) => k > 0 && v > 0,
    );
    if (kept.x.length === 0) {
      throw new DataError(`${input}: no positive shells to draw on log axes`);
    }
    return { label: labels.get(input) as string, ...kept, dots: true };
  });
  return renderFigure(series, {
    ...sizing(options),
    title: options.title ?? "Shell spectrum",
    xLabel: "k",
    yLabel: "shell sum",
    xScale: "log",
    yScale: "log",
  });
}

function renderDiagnostics(inputs: string[], options: RenderOptions): string {
  const columns = options.columns ?? ["max_vorticity", "max_velocity"];
  if (columns.length === 0) {
    throw new DataError("diagnostics needs at least one column to plot");
  }
  const labels = seriesLabels(inputs);
  const series: Series[] = [];
  for (const input of inputs) {
    const table = readTable(input, ["t", ...columns]);
    const t = numbers(table, "t");
    for (const column of columns) {
      series.push({
        label: inputs.length > 1 ? `${labels.get(input)} ${column}` : column,
        x: t,
        y: numbers(table, column),
        dots: true,
      });
    }
  }
  return renderFigure(series, {
    ...sizing(options),
    title: options.title ?? "Diagnostics time series",
    xLabel: "t",
    yLabel: columns.join(", "),
  });
}

function renderStretching(inputs: string[], options: RenderOptions): string {
  const table = readTable(onlyInput(inputs, "stretching"), [
    "t",
    "max_vorticity",
    "stretching_inf",
  ]);
  const t = numbers(table, "t");
  const w = numbers(table, "max_vorticity");
  const s = numbers(table, "stretching_inf");
  let anchor = -1;
  for (let i = 0; i < w.length; i += 1) {
    if ((w[i] as number) > 1 && (s[i] as number) > 0) {
      anchor = i;
      break;
    }
  }
  if (anchor === -1) {
    throw new DataError(
      `${table.path}: no rows with max_vorticity > 1 and positive stretching to anchor the growth models`,
    );
  }
  const w0 = w[anchor] as number;
  const s0 = s[anchor] as number;
  const c1 = s0 / (w0 * Math.log(w0));
  const c2 = s0 / w0 ** 2;
  const measured: Series = { label: "stretching_inf", x: [], y: [], dots: true };
  const model1: Series = { label: `c1 w log w, c1=${shortNumber(c1)}`, x: [], y: [], dashed: true };
  const model2: Series = { label: `c2 w^2, c2=${shortNumber(c2)}`, x: [], y: [], dashed: true };
  for (let i = 0; i < t.length; i += 1) {
    const ti = t[i] as number;
    const wi = w[i] as number;
    const si = s[i] as number;
    if (wi <= 1) {
      continue;
    }
    if (si > 0) {
      measured.x.push(ti);
      measured.y.push(si);
    }
    model1.x.push(ti);
    model1.y.push(c1 * wi * Math.log(wi));
    model2.x.push(ti);
    model2.y.push(c2 * wi * wi);
  }
  return renderFigure([measured, model1, model2], {
    ...sizing(options),
    title: options.title ?? "Vortex stretching growth models",
    xLabel: "t",
    yLabel: "stretching",
    yScale: "log",
  });
}

function renderLoglogVorticity(inputs: string[], options: RenderOptions): string {
  const labels = seriesLabels(inputs);
  const series: Series[] = inputs.map((input) => {
    const table = readTable(input, ["t", "max_vorticity"]);
    const kept = positivePairs(
      numbers(table, "t"),
      numbers(table, "max_vorticity"),
      (_, v) => v > 1,
    );
    if (kept.x.length === 0) {
      throw new DataError(
        `${input}: no rows with max_vorticity > 1; log log is undefined`,
      );
    }
    return {
      label: labels.get(input) as string,
      x: kept.x,
      y: kept.y.map((v) => Math.log(Math.log(v))),
      dots: true,
    };
  });
  return renderFigure(series, {
    ...sizing(options),
    title: options.title ?? "Doubly logarithmic max vorticity",
    xLabel: "t",
    yLabel: "log log max_vorticity",
  });
}

function renderContour(inputs: string[], options: RenderOptions): string {
  const table = readTable(onlyInput(inputs, "contour"), ["level", "polyline", "x", "y"]);
  const x = numbers(table, "x");
  const y = numbers(table, "y");
  const groups = new Map<string, { level: string; x: number[]; y: number[] }>();
  const levelOrder: string[] = [];
  table.rows.forEach((row, i) => {
    const level = row["level"] as string;
    const key = `${level}#${row["polyline"]}`;
    if (!groups.has(key)) {
      groups.set(key, { level, x: [], y: [] });
      if (!levelOrder.includes(level)) {
        levelOrder.push(level);
      }
    }
    const group = groups.get(key) as { level: string; x: number[]; y: number[] };
    group.x.push(x[i] as number);
    group.y.push(y[i] as number);
  });
  if (groups.size === 0) {
    throw new DataError(`${table.path}: no contour points`);
  }
  const seen = new Set<string>();
  const series: Series[] = [];
  for (const group of groups.values()) {
    const label = `level ${shortNumber(Number(group.level))}`;
    series.push({
      label,
      x: group.x,
      y: group.y,
      inLegend: !seen.has(label),
    });
    seen.add(label);
  }
  return renderFigure(series, {
    ...sizing(options),
    title: options.title ?? "Vorticity contour slice",
    xLabel: "x",
    yLabel: "y",
    equalAspect: true,
  });
}

export const KINDS: Record<string, KindDef> = {
  "filter-profile": {
    summary: "both filter response curves with the 2/3 cutoff marked",
    render: renderFilterProfile,
  },
  errors: {
    summary: "error norm vs time, one curve per filter and resolution",
    render: renderErrors,
  },
  pointwise: {
    summary: "pointwise error vs x on a log scale",
    render: renderPointwise,
  },
  spectrum: {
    summary: "mode moduli overlaid on the oracle spectrum",
    render: renderSpectrum,
  },
  "shell-spectrum": {
    summary: "energy or enstrophy shell sums on log-log axes",
    render: renderShellSpectrum,
  },
  diagnostics: {
    summary: "diagnostic columns vs time (default max vorticity, max velocity)",
    render: renderDiagnostics,
  },
  stretching: {
    summary: "stretching bound against anchored growth models",
    render: renderStretching,
  },
  "loglog-vorticity": {
    summary: "log log of max vorticity vs time",
    render: renderLoglogVorticity,
  },
  contour: {
    summary: "contour polylines of a vorticity slice, equal aspect",
    render: renderContour,
  },
};

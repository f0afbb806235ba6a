import { scaleLinear, scaleLog } from "d3-scale";

import { DataError } from "./errors";

export type AxisKind = "linear" | "log";

export interface Tick {
  value: number;
  label: string;
}

export interface Scale {
  kind: AxisKind;
  domain: [number, number];
  map(value: number): number;
  ticks(): Tick[];
}

/** Compact tick label: plain decimals near 1, exponent form far from it. */
export function tickLabel(value: number): string {
  if (value === 0) {
    return "0";
  }
  const magnitude = Math.abs(value);
  if (magnitude >= 1e4 || magnitude < 1e-3) {
    return value.toExponential(0).replace("e+", "e");
  }
  return String(Number(value.toPrecision(6)));
}

function spread(kind: AxisKind, lo: number, hi: number): [number, number] {
  if (lo !== hi) {
    return [lo, hi];
  }
  // degenerate one-value domain: open a window around it so ticks exist
  return kind === "log" ? [lo / 10, hi * 10] : [lo - 1, hi + 1];
}

/**
 * Wrap d3 scales behind one interface.
 *
 * `nice` rounds the domain outward to tick-friendly bounds; equal-aspect
 * figures pass false so both axes keep exactly the span they were given.
 */
export function makeScale(
  kind: AxisKind,
  domain: [number, number],
  range: [number, number],
  nice = true,
): Scale {
  let [lo, hi] = spread(kind, domain[0], domain[1]);
  if (kind === "log") {
    if (lo <= 0) {
      throw new DataError(`log axis requires positive values, got ${lo}`);
    }
    const scale = scaleLog().domain([lo, hi]).range(range);
    if (nice) {
      scale.nice();
    }
    [lo, hi] = scale.domain() as [number, number];
    const decades = scale
      .ticks()
      .filter((t) => Math.abs(Math.round(Math.log10(t)) - Math.log10(t)) < 1e-9);
    const values = decades.length >= 2 ? decades : scale.ticks(5);
    return {
      kind,
      domain: [lo, hi],
      map: (v) => scale(v),
      ticks: () => values.map((v) => ({ value: v, label: tickLabel(v) })),
    };
  }
  const scale = scaleLinear().domain([lo, hi]).range(range);
  if (nice) {
    scale.nice();
  }
  [lo, hi] = scale.domain() as [number, number];
  return {
    kind,
    domain: [lo, hi],
    map: (v) => scale(v),
    ticks: () => scale.ticks(6).map((v) => ({ value: v, label: tickLabel(v) })),
  };
}

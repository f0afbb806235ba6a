import { DataError } from "./errors";
import { AxisKind, makeScale, Scale } from "./scale";
import { el, polylinePoints, text } from "./svg";

export interface Series {
  label: string;
  x: number[];
  y: number[];
  /** dashed stroke, used for model/oracle overlays */
  dashed?: boolean;
  /** draw a dot at every sample on top of the line */
  dots?: boolean;
  /** explicit stroke color; otherwise assigned from the palette by label */
  color?: string;
  /** suppress a legend entry (repeated polylines of one contour level) */
  inLegend?: boolean;
}

export interface Marker {
  axis: "x" | "y";
  value: number;
  label?: string;
}

export interface FigureOptions {
  title?: string;
  xLabel?: string;
  yLabel?: string;
  xScale?: AxisKind;
  yScale?: AxisKind;
  width?: number;
  height?: number;
  markers?: Marker[];
  /** same data units per pixel on both axes; disables domain rounding */
  equalAspect?: boolean;
  legend?: boolean;
}

export const PALETTE = [
  "#1f77b4",
  "#d62728",
  "#2ca02c",
  "#9467bd",
  "#ff7f0e",
  "#8c564b",
  "#17becf",
  "#7f7f7f",
  "#bcbd22",
  "#e377c2",
];

const MARGIN = { top: 44, right: 20, bottom: 52, left: 70 };

interface Extent {
  lo: number;
  hi: number;
}

function extend(extent: Extent | null, value: number): Extent {
  if (extent === null) {
    return { lo: value, hi: value };
  }
  return { lo: Math.min(extent.lo, value), hi: Math.max(extent.hi, value) };
}

function checkSeries(series: Series[], xKind: AxisKind, yKind: AxisKind): void {
  if (series.length === 0) {
    throw new DataError("figure has no series to draw");
  }
  for (const s of series) {
    if (s.x.length !== s.y.length) {
      throw new Error(`series "${s.label}" has mismatched x/y lengths`);
    }
    if (s.x.length === 0) {
      throw new DataError(`series "${s.label}" has no data points`);
    }
    for (const [axis, kind, values] of [
      ["x", xKind, s.x],
      ["y", yKind, s.y],
    ] as const) {
      for (const v of values) {
        if (!Number.isFinite(v)) {
          throw new DataError(`series "${s.label}" has a non-finite ${axis} value`);
        }
        if (kind === "log" && v <= 0) {
          throw new DataError(
            `series "${s.label}" has ${axis} = ${v}, not drawable on a log axis`,
          );
        }
      }
    }
  }
}

function pad(extent: Extent, kind: AxisKind, fraction: number): [number, number] {
  if (kind === "log") {
    const factor = (extent.hi / extent.lo) ** fraction;
    return [extent.lo / factor, extent.hi * factor];
  }
  const slack = (extent.hi - extent.lo || 1) * fraction;
  return [extent.lo - slack, extent.hi + slack];
}

/** Stroke color per legend label: explicit overrides, then palette order. */
function assignColors(series: Series[]): Map<string, string> {
  const colors = new Map<string, string>();
  let next = 0;
  for (const s of series) {
    if (colors.has(s.label)) {
      continue;
    }
    if (s.color !== undefined) {
      colors.set(s.label, s.color);
    } else {
      colors.set(s.label, PALETTE[next % PALETTE.length] as string);
      next += 1;
    }
  }
  return colors;
}

function drawAxes(x: Scale, y: Scale, width: number, height: number): string[] {
  const parts: string[] = [];
  const top = MARGIN.top;
  const bottom = height - MARGIN.bottom;
  const left = MARGIN.left;
  const right = width - MARGIN.right;
  for (const tick of x.ticks()) {
    const px = x.map(tick.value);
    if (px < left - 0.5 || px > right + 0.5) {
      continue;
    }
    parts.push(el("line", { x1: px, y1: top, x2: px, y2: bottom, stroke: "#e4e4e4" }));
    parts.push(el("line", { x1: px, y1: bottom, x2: px, y2: bottom + 5, stroke: "#333" }));
    parts.push(
      text(tick.label, {
        x: px,
        y: bottom + 18,
        "text-anchor": "middle",
        "font-size": 11,
        fill: "#333",
      }),
    );
  }
  for (const tick of y.ticks()) {
    const py = y.map(tick.value);
    if (py < top - 0.5 || py > bottom + 0.5) {
      continue;
    }
    parts.push(el("line", { x1: left, y1: py, x2: right, y2: py, stroke: "#e4e4e4" }));
    parts.push(el("line", { x1: left - 5, y1: py, x2: left, y2: py, stroke: "#333" }));
    parts.push(
      text(tick.label, {
        x: left - 8,
        y: py + 4,
        "text-anchor": "end",
        "font-size": 11,
        fill: "#333",
      }),
    );
  }
  parts.push(
    el("rect", {
      x: left,
      y: top,
      width: right - left,
      height: bottom - top,
      fill: "none",
      stroke: "#333",
    }),
  );
  return parts;
}

function drawLegend(series: Series[], colors: Map<string, string>, width: number): string[] {
  const entries: { label: string; color: string; dashed: boolean }[] = [];
  for (const s of series) {
    if (s.inLegend === false || entries.some((e) => e.label === s.label)) {
      continue;
    }
    entries.push({
      label: s.label,
      color: colors.get(s.label) as string,
      dashed: s.dashed === true,
    });
  }
  if (entries.length === 0) {
    return [];
  }
  const longest = Math.max(...entries.map((e) => e.label.length));
  const boxWidth = longest * 6.8 + 44;
  const boxHeight = entries.length * 17 + 10;
  const x0 = width - MARGIN.right - boxWidth - 8;
  const y0 = MARGIN.top + 8;
  const parts = [
    el("rect", {
      x: x0,
      y: y0,
      width: boxWidth,
      height: boxHeight,
      fill: "#ffffff",
      "fill-opacity": "0.85",
      stroke: "#bbb",
    }),
  ];
  entries.forEach((entry, i) => {
    const py = y0 + 13 + i * 17;
    const lineAttrs: Record<string, string | number> = {
      x1: x0 + 8,
      y1: py - 4,
      x2: x0 + 30,
      y2: py - 4,
      stroke: entry.color,
      "stroke-width": 2,
    };
    if (entry.dashed) {
      lineAttrs["stroke-dasharray"] = "6 4";
    }
    parts.push(el("line", lineAttrs));
    parts.push(
      text(entry.label, { x: x0 + 36, y: py, "font-size": 12, fill: "#222" }),
    );
  });
  return parts;
}

/** Compose the complete SVG document for a set of series. */
export function renderFigure(series: Series[], options: FigureOptions = {}): string {
  const xKind = options.xScale ?? "linear";
  const yKind = options.yScale ?? "linear";
  checkSeries(series, xKind, yKind);
  const width = options.width ?? 720;
  const height = options.height ?? 480;
  const markers = options.markers ?? [];

  let xExtent: Extent | null = null;
  let yExtent: Extent | null = null;
  for (const s of series) {
    for (const v of s.x) {
      xExtent = extend(xExtent, v);
    }
    for (const v of s.y) {
      yExtent = extend(yExtent, v);
    }
  }
  for (const marker of markers) {
    if (marker.axis === "x") {
      xExtent = extend(xExtent, marker.value);
    } else {
      yExtent = extend(yExtent, marker.value);
    }
  }

  const plotWidth = width - MARGIN.left - MARGIN.right;
  const plotHeight = height - MARGIN.top - MARGIN.bottom;
  let xDomain = pad(xExtent as Extent, xKind, options.equalAspect ? 0.04 : 0);
  let yDomain = pad(yExtent as Extent, yKind, options.equalAspect ? 0.04 : 0.02);
  let nice = true;
  if (options.equalAspect) {
    // widen whichever span is too small for the pixel aspect ratio
    nice = false;
    const target = plotWidth / plotHeight;
    const xSpan = xDomain[1] - xDomain[0];
    const ySpan = yDomain[1] - yDomain[0];
    if (xSpan / ySpan < target) {
      const grow = (ySpan * target - xSpan) / 2;
      xDomain = [xDomain[0] - grow, xDomain[1] + grow];
    } else {
      const grow = (xSpan / target - ySpan) / 2;
      yDomain = [yDomain[0] - grow, yDomain[1] + grow];
    }
  }
  const x = makeScale(xKind, xDomain, [MARGIN.left, width - MARGIN.right], nice);
  const y = makeScale(yKind, yDomain, [height - MARGIN.bottom, MARGIN.top], nice);
  const colors = assignColors(series);

  const parts: string[] = [
    el("rect", { x: 0, y: 0, width, height, fill: "#ffffff" }),
    ...drawAxes(x, y, width, height),
  ];

  for (const marker of markers) {
    const attrs =
      marker.axis === "x"
        ? {
            x1: x.map(marker.value),
            y1: MARGIN.top,
            x2: x.map(marker.value),
            y2: height - MARGIN.bottom,
          }
        : {
            x1: MARGIN.left,
            y1: y.map(marker.value),
            x2: width - MARGIN.right,
            y2: y.map(marker.value),
          };
    parts.push(
      el("line", {
        ...attrs,
        class: "marker",
        stroke: "#555",
        "stroke-dasharray": "4 4",
      }),
    );
    if (marker.label) {
      const anchor =
        marker.axis === "x"
          ? { x: x.map(marker.value) + 5, y: MARGIN.top + 14 }
          : { x: MARGIN.left + 6, y: y.map(marker.value) - 5 };
      parts.push(
        text(marker.label, {
          ...anchor,
          class: "marker-label",
          "font-size": 12,
          fill: "#444",
        }),
      );
    }
  }

  for (const s of series) {
    const color = colors.get(s.label) as string;
    const px = s.x.map((v) => x.map(v));
    const py = s.y.map((v) => y.map(v));
    if (s.x.length > 1) {
      const attrs: Record<string, string | number> = {
        points: polylinePoints(px, py),
        fill: "none",
        stroke: color,
        "stroke-width": 1.6,
      };
      if (s.dashed) {
        attrs["stroke-dasharray"] = "6 4";
      }
      parts.push(el("polyline", attrs));
    }
    if (s.dots || s.x.length === 1) {
      for (let i = 0; i < px.length; i += 1) {
        parts.push(
          el("circle", { cx: px[i] as number, cy: py[i] as number, r: 2.6, fill: color }),
        );
      }
    }
  }

  if (options.legend !== false) {
    parts.push(...drawLegend(series, colors, width));
  }

  if (options.title) {
    parts.push(
      text(options.title, {
        x: width / 2,
        y: 24,
        "text-anchor": "middle",
        "font-size": 16,
        fill: "#111",
      }),
    );
  }
  if (options.xLabel) {
    parts.push(
      text(options.xLabel, {
        x: MARGIN.left + plotWidth / 2,
        y: height - 12,
        "text-anchor": "middle",
        "font-size": 13,
        fill: "#222",
      }),
    );
  }
  if (options.yLabel) {
    parts.push(
      el(
        "g",
        { transform: `translate(16,${MARGIN.top + plotHeight / 2}) rotate(-90)` },
        text(options.yLabel, { x: 0, y: 0, "text-anchor": "middle", "font-size": 13, fill: "#222" }),
      ),
    );
  }

  return el(
    "svg",
    {
      xmlns: "http://www.w3.org/2000/svg",
      width,
      height,
      viewBox: `0 0 ${width} ${height}`,
      "font-family": "sans-serif",
    },
    parts,
  );
}

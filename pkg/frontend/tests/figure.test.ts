import { describe, expect, it } from "vitest";

import { DataError } from "../src/errors";
import { renderFigure, Series } from "../src/figure";

const RAMP: Series = { label: "ramp", x: [0, 1, 2, 3], y: [1, 2, 4, 8] };

describe("renderFigure", () => {
  it("emits a standalone SVG document", () => {
    const svg = renderFigure([RAMP], { title: "demo" });
    expect(svg.startsWith('<svg xmlns="http://www.w3.org/2000/svg"')).toBe(true);
    expect(svg.endsWith("</svg>")).toBe(true);
    expect(svg).not.toContain("NaN");
    expect(svg).toContain("demo");
  });

  it("is deterministic for equal inputs", () => {
    const first = renderFigure([RAMP], { yScale: "log" });
    const second = renderFigure([RAMP], { yScale: "log" });
    expect(first).toBe(second);
  });

  it("rejects a figure with no series", () => {
    expect(() => renderFigure([])).toThrowError(DataError);
    expect(() => renderFigure([])).toThrowError(/no series/);
  });

  it("rejects an empty series by label", () => {
    expect(() => renderFigure([{ label: "hollow", x: [], y: [] }])).toThrowError(
      /series "hollow" has no data points/,
    );
  });

  it("rejects nonpositive values on log axes", () => {
    const bad: Series = { label: "drop", x: [0, 1], y: [1, 0] };
    expect(() => renderFigure([bad], { yScale: "log" })).toThrowError(DataError);
    expect(() => renderFigure([bad], { yScale: "log" })).toThrowError(/log axis/);
    expect(() => renderFigure([bad])).not.toThrow();
  });

  it("rejects non-finite values", () => {
    const bad: Series = { label: "inf", x: [0, 1], y: [1, Infinity] };
    expect(() => renderFigure([bad])).toThrowError(/non-finite/);
  });

  it("draws requested markers with labels", () => {
    const svg = renderFigure([RAMP], {
      markers: [{ axis: "x", value: 1.5, label: "midpoint" }],
    });
    expect(svg).toContain('class="marker"');
    expect(svg).toContain(">midpoint</text>");
  });

  it("deduplicates legend entries by label", () => {
    const twin: Series = { label: "ramp", x: [0, 1], y: [8, 1] };
    const svg = renderFigure([RAMP, twin]);
    expect(svg.match(/>ramp</g)).toHaveLength(1);
  });

  it("honors legend suppression", () => {
    const hidden: Series = { label: "ghost", x: [0, 1], y: [1, 2], inLegend: false };
    const svg = renderFigure([RAMP, hidden]);
    expect(svg).not.toContain(">ghost<");
    expect(svg).toContain(">ramp<");
  });

  it("dashes model series", () => {
    const model: Series = { label: "model", x: [0, 1], y: [1, 2], dashed: true };
    const svg = renderFigure([model]);
    expect(svg).toContain('stroke-dasharray="6 4"');
  });

  it("keeps units per pixel equal under equalAspect", () => {
    const square: Series = { label: "box", x: [0, 2], y: [0, 1] };
    const svg = renderFigure([square], { equalAspect: true, width: 720, height: 480 });
    expect(svg).not.toContain("NaN");
    // plot area is 630x384 px; x span 2 against y span 1 forces y to widen
    // so both axes carry the same scale; the polyline then covers fewer
    // vertical pixels than horizontal ones by the same ratio
    const points = /points="([^"]+)"/.exec(svg);
    expect(points).not.toBeNull();
    const pairs = (points as RegExpExecArray)[1]!.split(" ").map((p) => p.split(",").map(Number));
    const dx = Math.abs((pairs[1]![0] as number) - (pairs[0]![0] as number));
    const dy = Math.abs((pairs[1]![1] as number) - (pairs[0]![1] as number));
    expect(dx / dy).toBeCloseTo(2, 1);
  });

  it("escapes markup in labels", () => {
    const spiky: Series = { label: "a<b & c", x: [0, 1], y: [1, 2] };
    const svg = renderFigure([spiky], { title: 'say "hi"' });
    expect(svg).toContain("a&lt;b &amp; c");
    expect(svg).toContain("say &quot;hi&quot;");
  });
});

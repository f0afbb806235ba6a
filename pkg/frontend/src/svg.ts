/** Minimal string-building helpers for static SVG documents. */

export function esc(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

/** Fixed-precision coordinate so output bytes are deterministic. */
export function coord(value: number): string {
  if (!Number.isFinite(value)) {
    throw new Error(`non-finite SVG coordinate: ${value}`);
  }
  const rounded = Math.round(value * 100) / 100;
  // normalize -0 so equal figures serialize identically
  return String(rounded === 0 ? 0 : rounded);
}

export function el(
  tag: string,
  attrs: Record<string, string | number>,
  children: string | string[] = [],
): string {
  const body = Array.isArray(children) ? children.join("") : children;
  const parts = Object.entries(attrs).map(
    ([key, value]) => ` ${key}="${typeof value === "number" ? coord(value) : esc(value)}"`,
  );
  const open = `<${tag}${parts.join("")}`;
  return body === "" ? `${open}/>` : `${open}>${body}</${tag}>`;
}

export function text(
  content: string,
  attrs: Record<string, string | number>,
): string {
  return el("text", attrs, esc(content));
}

export function polylinePoints(xs: number[], ys: number[]): string {
  const pairs: string[] = [];
  for (let i = 0; i < xs.length; i += 1) {
    pairs.push(`${coord(xs[i] as number)},${coord(ys[i] as number)}`);
  }
  return pairs.join(" ");
}

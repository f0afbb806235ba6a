export { numbers, readTable } from "./csv";
export type { Table } from "./csv";
export { DataError, SchemaError } from "./errors";
export { PALETTE, renderFigure } from "./figure";
export type { FigureOptions, Marker, Series } from "./figure";
export { makeScale, tickLabel } from "./scale";
export type { AxisKind, Scale, Tick } from "./scale";
export { KINDS } from "./kinds";
export type { KindDef, RenderOptions } from "./kinds";
export { buildParser, main } from "./cli";

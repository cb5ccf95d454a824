/**
 * Figure renderers: each consumes the primary component's CSV schema verbatim
 * and emits a deterministic SVG. No numerical work happens here beyond axis
 * transforms; the CSVs are the single source of truth.
 */
import { mkdirSync, renameSync, writeFileSync } from "fs";
import { dirname, join } from "path";
import { CsvTable, loadCsv, numericColumn, requireColumns, SchemaError } from "./csv.js";
import { extentOf, Scene } from "./svg.js";

export type FigureKind = "trajectories" | "caustic" | "packet-comparison";

export interface FigureSpec {
  kind: FigureKind;
  /** input CSV paths; meaning depends on kind (see renderers) */
  inputs: string[];
  xLabel: string;
  yLabel: string;
  title: string;
  output: string;
}

const FAMILY_COLUMNS = ["n", "p0", "tau", "q"];
const ENVELOPE_COLUMNS = ["n", "t", "x", "x_critical_path"];
const PACKET_COLUMNS = [
  "ybar", "re_pos_total", "im_pos_total", "re_mom_total", "im_mom_total",
  "re_pos_direct", "im_pos_direct", "re_pos_bounce", "im_pos_bounce",
];

/** Group row indices by the value of a key column, preserving encounter order. */
function groupBy(table: CsvTable, key: string): Map<string, number[]> {
  const groups = new Map<string, number[]>();
  table.rows.forEach((row, i) => {
    const k = row[key];
    const bucket = groups.get(k);
    if (bucket) {
      bucket.push(i);
    } else {
      groups.set(k, [i]);
    }
  });
  return groups;
}

const pick = (values: number[], idx: number[]): number[] => idx.map((i) => values[i]);

/** One curve per initial momentum from family.csv (first n value only). */
function renderTrajectories(spec: FigureSpec): string {
  const table = loadCsv(spec.inputs[0]);
  requireColumns(table, FAMILY_COLUMNS, spec.inputs[0]);
  const tau = numericColumn(table, "tau");
  const q = numericColumn(table, "q");
  const firstN = table.rows[0].n;
  const keep = table.rows
    .map((row, i) => (row.n === firstN ? i : -1))
    .filter((i) => i >= 0);
  const scene = new Scene(extentOf(pick(tau, keep), pick(q, keep)),
                          spec.xLabel, spec.yLabel, spec.title);
  for (const idx of groupBy(table, "p0").values()) {
    const sel = idx.filter((i) => table.rows[i].n === firstN);
    if (sel.length > 1) {
      scene.polyline(pick(tau, sel), pick(q, sel), "steelblue", 0.8);
    }
  }
  return scene.render([{ label: `family n=${firstN}`, stroke: "steelblue" }]);
}

/** Family curves with the detected envelope and the critical path overlaid. */
function renderCaustic(spec: FigureSpec): string {
  if (spec.inputs.length < 2) {
    throw new SchemaError("caustic figure needs [family.csv, envelope.csv]");
  }
  const family = loadCsv(spec.inputs[0]);
  requireColumns(family, FAMILY_COLUMNS, spec.inputs[0]);
  const envelope = loadCsv(spec.inputs[1]);
  requireColumns(envelope, ENVELOPE_COLUMNS, spec.inputs[1]);

  const tau = numericColumn(family, "tau");
  const q = numericColumn(family, "q");
  const firstN = family.rows[0].n;
  const keep = family.rows
    .map((row, i) => (row.n === firstN ? i : -1))
    .filter((i) => i >= 0);
  const scene = new Scene(extentOf(pick(tau, keep), pick(q, keep)),
                          spec.xLabel, spec.yLabel, spec.title);
  for (const idx of groupBy(family, "p0").values()) {
    const sel = idx.filter((i) => family.rows[i].n === firstN);
    if (sel.length > 1) {
      scene.polyline(pick(tau, sel), pick(q, sel), "lightsteelblue", 0.7);
    }
  }
  const et = numericColumn(envelope, "t");
  const ex = numericColumn(envelope, "x");
  const ec = numericColumn(envelope, "x_critical_path");
  const esel = envelope.rows
    .map((row, i) => (row.n === firstN ? i : -1))
    .filter((i) => i >= 0);
  scene.polyline(pick(et, esel), pick(ex, esel), "crimson", 1.8);
  scene.polyline(pick(et, esel), pick(ec, esel), "black", 1.2, "5,3");
  return scene.render([
    { label: `family n=${firstN}`, stroke: "lightsteelblue" },
    { label: "envelope", stroke: "crimson" },
    { label: "critical path", stroke: "black", dash: "5,3" },
  ]);
}

/** Four |amplitude| curves vs ybar: position/momentum totals and branches. */
function renderPacketComparison(spec: FigureSpec): string {
  const table = loadCsv(spec.inputs[0]);
  requireColumns(table, PACKET_COLUMNS, spec.inputs[0]);
  const ybar = numericColumn(table, "ybar");
  const mag = (re: string, im: string): number[] => {
    const res = numericColumn(table, re);
    const ims = numericColumn(table, im);
    return res.map((v, i) => Math.hypot(v, ims[i]));
  };
  const curves = [
    { label: "position total", stroke: "crimson", ys: mag("re_pos_total", "im_pos_total") },
    { label: "momentum total", stroke: "steelblue", ys: mag("re_mom_total", "im_mom_total") },
    { label: "position direct", stroke: "seagreen", dash: "4,3",
      ys: mag("re_pos_direct", "im_pos_direct") },
    { label: "position bounce", stroke: "darkorange", dash: "4,3",
      ys: mag("re_pos_bounce", "im_pos_bounce") },
  ];
  const allY = curves.flatMap((c) => c.ys);
  const scene = new Scene(extentOf(ybar, allY), spec.xLabel, spec.yLabel, spec.title);
  for (const c of curves) {
    scene.polyline(ybar, c.ys, c.stroke, 1.4, c.dash);
  }
  return scene.render(curves.map(({ label, stroke, dash }) => ({ label, stroke, dash })));
}

export function renderToString(spec: FigureSpec): string {
  if (spec.inputs.length === 0) {
    throw new SchemaError("figure spec has no inputs");
  }
  switch (spec.kind) {
    case "trajectories":
      return renderTrajectories(spec);
    case "caustic":
      return renderCaustic(spec);
    case "packet-comparison":
      return renderPacketComparison(spec);
    default:
      throw new SchemaError(`unknown figure kind '${(spec as FigureSpec).kind}'`);
  }
}

/** Render and write atomically (temp file in the target dir, then rename). */
export function render(spec: FigureSpec): void {
  const svg = renderToString(spec);
  mkdirSync(dirname(spec.output), { recursive: true });
  const tmp = join(dirname(spec.output), `.${Date.now()}-${process.pid}.tmp`);
  writeFileSync(tmp, svg, "utf-8");
  renameSync(tmp, spec.output);
}

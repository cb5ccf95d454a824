/**
 * CLI entry: render one figure or a whole manifest.
 *
 *   node dist/main.js --manifest figures.json
 *   node dist/main.js --kind caustic --out fig.svg family.csv envelope.csv
 *
 * A manifest is a JSON array of FigureSpec objects. Exit code 2 signals a
 * usage or schema problem so callers can distinguish it from crashes.
 */
import { readFileSync } from "fs";
import { MissingFileError, SchemaError } from "./csv.js";
import { FigureKind, FigureSpec, render } from "./render.js";

const KINDS: FigureKind[] = ["trajectories", "caustic", "packet-comparison"];

function usage(): never {
  process.stderr.write(
    "usage: main.js --manifest SPECS.json\n" +
    "       main.js --kind KIND --out FILE.svg [--title T] [--x-label X] [--y-label Y] INPUT.csv...\n");
  process.exit(2);
}

export function specsFromManifest(path: string): FigureSpec[] {
  let raw: string;
  try {
    raw = readFileSync(path, "utf-8");
  } catch {
    throw new MissingFileError(`cannot read manifest ${path}`);
  }
  let data: unknown;
  try {
    data = JSON.parse(raw);
  } catch (err) {
    throw new SchemaError(`${path}: invalid JSON (${(err as Error).message})`);
  }
  if (!Array.isArray(data)) {
    throw new SchemaError(`${path}: manifest must be a JSON array`);
  }
  return data.map((entry, i) => {
    const spec = entry as Partial<FigureSpec>;
    if (!spec.kind || !KINDS.includes(spec.kind)) {
      throw new SchemaError(`${path}[${i}]: bad kind '${spec.kind}'`);
    }
    if (!Array.isArray(spec.inputs) || spec.inputs.length === 0 || !spec.output) {
      throw new SchemaError(`${path}[${i}]: inputs and output are required`);
    }
    return {
      kind: spec.kind,
      inputs: spec.inputs,
      output: spec.output,
      title: spec.title ?? spec.kind,
      xLabel: spec.xLabel ?? "x",
      yLabel: spec.yLabel ?? "y",
    };
  });
}

function parseArgs(argv: string[]): FigureSpec[] {
  const positional: string[] = [];
  const opts: Record<string, string> = {};
  for (let i = 0; i < argv.length; i += 1) {
    const arg = argv[i];
    if (arg.startsWith("--")) {
      const value = argv[i + 1];
      if (value === undefined) {
        usage();
      }
      opts[arg.slice(2)] = value;
      i += 1;
    } else {
      positional.push(arg);
    }
  }
  if (opts.manifest) {
    return specsFromManifest(opts.manifest);
  }
  if (!opts.kind || !opts.out || positional.length === 0) {
    usage();
  }
  if (!KINDS.includes(opts.kind as FigureKind)) {
    usage();
  }
  return [{
    kind: opts.kind as FigureKind,
    inputs: positional,
    output: opts.out,
    title: opts.title ?? opts.kind,
    xLabel: opts["x-label"] ?? "x",
    yLabel: opts["y-label"] ?? "y",
  }];
}

export function main(argv: string[]): number {
  let specs: FigureSpec[];
  try {
    specs = parseArgs(argv);
    for (const spec of specs) {
      render(spec);
      process.stdout.write(`wrote ${spec.output}\n`);
    }
  } catch (err) {
    if (err instanceof SchemaError || err instanceof MissingFileError) {
      process.stderr.write(`error: ${err.message}\n`);
      return 2;
    }
    throw err;
  }
  return 0;
}

if (process.argv[1] && import.meta.url.endsWith(process.argv[1].split("/").pop() ?? "")) {
  process.exit(main(process.argv.slice(2)));
}

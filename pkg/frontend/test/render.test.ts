import { existsSync, mkdtempSync, readFileSync, writeFileSync } from "fs";
import { tmpdir } from "os";
import { dirname, join } from "path";
import { fileURLToPath } from "url";
import { describe, expect, it } from "vitest";
import { MissingFileError, SchemaError } from "../src/csv.js";
import { FigureSpec, render, renderToString } from "../src/render.js";
import { main, specsFromManifest } from "../src/main.js";

const GOLDEN = join(dirname(fileURLToPath(import.meta.url)), "..", "golden");

function spec(kind: FigureSpec["kind"], inputs: string[], output = "/tmp/out.svg"): FigureSpec {
  return { kind, inputs, output, title: kind, xLabel: "x", yLabel: "y" };
}

const packetSpec = () => spec("packet-comparison", [join(GOLDEN, "packet_evolve.csv")]);
const causticSpec = () =>
  spec("caustic", [join(GOLDEN, "family.csv"), join(GOLDEN, "envelope.csv")]);
const trajSpec = () => spec("trajectories", [join(GOLDEN, "family.csv")]);

describe("renderToString", () => {
  it("renders all three kinds from the golden CSVs", () => {
    for (const s of [packetSpec(), causticSpec(), trajSpec()]) {
      const svg = renderToString(s);
      expect(svg.startsWith("<svg ")).toBe(true);
      expect(svg.endsWith("</svg>\n")).toBe(true);
      expect(svg).toContain("<polyline");
    }
  });

  it("is byte-identical across reruns", () => {
    for (const s of [packetSpec(), causticSpec(), trajSpec()]) {
      expect(renderToString(s)).toBe(renderToString(s));
    }
  });

  it("draws the four packet comparison curves plus legend", () => {
    const svg = renderToString(packetSpec());
    expect(svg).toContain("position total");
    expect(svg).toContain("momentum total");
    expect(svg).toContain("position direct");
    expect(svg).toContain("position bounce");
  });

  it("overlays envelope and critical path on the caustic figure", () => {
    const svg = renderToString(causticSpec());
    expect(svg).toContain("envelope");
    expect(svg).toContain("critical path");
    expect(svg).toContain('stroke-dasharray="5,3"');
  });

  it("rejects a missing input file", () => {
    expect(() => renderToString(spec("trajectories", ["/no/such.csv"])))
      .toThrow(MissingFileError);
  });

  it("rejects a CSV with the wrong columns", () => {
    const dir = mkdtempSync(join(tmpdir(), "render-"));
    const bad = join(dir, "bad.csv");
    writeFileSync(bad, "a,b\n1,2\n", "utf-8");
    expect(() => renderToString(spec("trajectories", [bad]))).toThrow(SchemaError);
  });

  it("rejects a caustic spec without an envelope input", () => {
    expect(() => renderToString(spec("caustic", [join(GOLDEN, "family.csv")])))
      .toThrow(SchemaError);
  });

  it("rejects an empty input list", () => {
    expect(() => renderToString(spec("trajectories", []))).toThrow(SchemaError);
  });
});

describe("render", () => {
  it("writes the SVG to disk, creating directories", () => {
    const dir = mkdtempSync(join(tmpdir(), "render-"));
    const out = join(dir, "sub", "fig.svg");
    render({ ...packetSpec(), output: out });
    expect(existsSync(out)).toBe(true);
    expect(readFileSync(out, "utf-8")).toBe(renderToString(packetSpec()));
  });
});

describe("manifest batch mode", () => {
  it("renders every figure in a manifest via main()", () => {
    const dir = mkdtempSync(join(tmpdir(), "manifest-"));
    const entries = [
      { ...packetSpec(), output: join(dir, "packet.svg") },
      { ...causticSpec(), output: join(dir, "caustic.svg") },
      { ...trajSpec(), output: join(dir, "traj.svg") },
    ];
    const manifest = join(dir, "figures.json");
    writeFileSync(manifest, JSON.stringify(entries), "utf-8");
    expect(main(["--manifest", manifest])).toBe(0);
    for (const e of entries) {
      expect(existsSync(e.output)).toBe(true);
    }
  });

  it("rejects a manifest that is not an array", () => {
    const dir = mkdtempSync(join(tmpdir(), "manifest-"));
    const manifest = join(dir, "bad.json");
    writeFileSync(manifest, '{"kind": "caustic"}', "utf-8");
    expect(() => specsFromManifest(manifest)).toThrow(SchemaError);
  });

  it("rejects a manifest entry with an unknown kind", () => {
    const dir = mkdtempSync(join(tmpdir(), "manifest-"));
    const manifest = join(dir, "bad.json");
    writeFileSync(manifest,
      JSON.stringify([{ kind: "pie", inputs: ["x.csv"], output: "y.svg" }]), "utf-8");
    expect(() => specsFromManifest(manifest)).toThrow(SchemaError);
  });

  it("returns exit code 2 for a missing manifest", () => {
    expect(main(["--manifest", "/no/such.json"])).toBe(2);
  });
});

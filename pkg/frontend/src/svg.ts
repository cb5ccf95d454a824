/**
 * Minimal deterministic SVG scene builder.
 *
 * Coordinates are formatted with a fixed precision so that identical inputs
 * produce byte-identical documents; no timestamps, ids, or random values.
 */

export interface Extent {
  xMin: number;
  xMax: number;
  yMin: number;
  yMax: number;
}

const WIDTH = 720;
const HEIGHT = 480;
const MARGIN = { left: 60, right: 20, top: 30, bottom: 45 };

const fmt = (v: number): string => {
  // -0 and 0 must serialize identically
  const r = Number(v.toFixed(2));
  return (Object.is(r, -0) ? 0 : r).toFixed(2);
};

export class Scene {
  private parts: string[] = [];
  private readonly extent: Extent;

  constructor(extent: Extent, readonly xLabel: string, readonly yLabel: string,
              readonly title: string) {
    if (!(extent.xMax > extent.xMin) || !(extent.yMax > extent.yMin)) {
      throw new Error("degenerate axis extent");
    }
    this.extent = extent;
  }

  private sx(x: number): number {
    const w = WIDTH - MARGIN.left - MARGIN.right;
    return MARGIN.left + (w * (x - this.extent.xMin)) / (this.extent.xMax - this.extent.xMin);
  }

  private sy(y: number): number {
    const h = HEIGHT - MARGIN.top - MARGIN.bottom;
    return MARGIN.top + h - (h * (y - this.extent.yMin)) / (this.extent.yMax - this.extent.yMin);
  }

  polyline(xs: number[], ys: number[], stroke: string, width = 1.0,
           dash?: string): void {
    const pts = xs.map((x, i) => `${fmt(this.sx(x))},${fmt(this.sy(ys[i]))}`).join(" ");
    const dashAttr = dash ? ` stroke-dasharray="${dash}"` : "";
    this.parts.push(
      `<polyline fill="none" stroke="${stroke}" stroke-width="${width}"${dashAttr} points="${pts}"/>`);
  }

  private axisTicks(min: number, max: number, n = 6): number[] {
    const step = (max - min) / (n - 1);
    return Array.from({ length: n }, (_, i) => min + i * step);
  }

  render(legend: { label: string; stroke: string; dash?: string }[]): string {
    const axes: string[] = [];
    const x0 = MARGIN.left;
    const x1 = WIDTH - MARGIN.right;
    const y0 = HEIGHT - MARGIN.bottom;
    const y1 = MARGIN.top;
    axes.push(`<line x1="${x0}" y1="${y0}" x2="${x1}" y2="${y0}" stroke="black"/>`);
    axes.push(`<line x1="${x0}" y1="${y0}" x2="${x0}" y2="${y1}" stroke="black"/>`);
    for (const t of this.axisTicks(this.extent.xMin, this.extent.xMax)) {
      const px = fmt(this.sx(t));
      axes.push(`<line x1="${px}" y1="${y0}" x2="${px}" y2="${y0 + 4}" stroke="black"/>`);
      axes.push(`<text x="${px}" y="${y0 + 18}" font-size="11" text-anchor="middle">${fmt(t)}</text>`);
    }
    for (const t of this.axisTicks(this.extent.yMin, this.extent.yMax)) {
      const py = fmt(this.sy(t));
      axes.push(`<line x1="${x0 - 4}" y1="${py}" x2="${x0}" y2="${py}" stroke="black"/>`);
      axes.push(`<text x="${x0 - 8}" y="${py}" font-size="11" text-anchor="end" dominant-baseline="middle">${fmt(t)}</text>`);
    }
    axes.push(`<text x="${(x0 + x1) / 2}" y="${HEIGHT - 8}" font-size="13" text-anchor="middle">${this.xLabel}</text>`);
    axes.push(`<text x="16" y="${(y0 + y1) / 2}" font-size="13" text-anchor="middle" transform="rotate(-90 16 ${(y0 + y1) / 2})">${this.yLabel}</text>`);
    axes.push(`<text x="${(x0 + x1) / 2}" y="18" font-size="14" text-anchor="middle">${this.title}</text>`);

    const leg: string[] = [];
    legend.forEach((item, i) => {
      const ly = y1 + 14 + 16 * i;
      const dashAttr = item.dash ? ` stroke-dasharray="${item.dash}"` : "";
      leg.push(`<line x1="${x1 - 150}" y1="${ly}" x2="${x1 - 120}" y2="${ly}" stroke="${item.stroke}" stroke-width="1.5"${dashAttr}/>`);
      leg.push(`<text x="${x1 - 114}" y="${ly + 4}" font-size="11">${item.label}</text>`);
    });

    return [
      `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" viewBox="0 0 ${WIDTH} ${HEIGHT}">`,
      `<rect width="${WIDTH}" height="${HEIGHT}" fill="white"/>`,
      ...axes,
      ...this.parts,
      ...leg,
      `</svg>`,
      ``,
    ].join("\n");
  }
}

export function extentOf(xs: number[], ys: number[], pad = 0.05): Extent {
  const xMin = Math.min(...xs);
  const xMax = Math.max(...xs);
  const yMin = Math.min(...ys);
  const yMax = Math.max(...ys);
  const dx = (xMax - xMin || 1) * pad;
  const dy = (yMax - yMin || 1) * pad;
  return { xMin: xMin - dx, xMax: xMax + dx, yMin: yMin - dy, yMax: yMax + dy };
}

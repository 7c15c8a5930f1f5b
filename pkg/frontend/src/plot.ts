/**
 * Log-log convergence figures from ewinlse study CSVs.
 *
 * The CSV schema is the solver's fixed column set; each figure holds one
 * panel per requested norm, series grouped by scheme (and study label when
 * several studies share the file), dashed order-guide lines anchored at each
 * series' final point, and open markers at the panel floor for runs that
 * blew up.  Rendering is a pure function of the CSV text, so identical input
 * yields byte-identical SVG.
 */

export const REQUIRED_COLUMNS = [
  "study_label",
  "scheme",
  "potential",
  "nonlinearity",
  "datum",
  "norm",
  "tau",
  "h",
  "error",
  "order_local",
  "blown_up",
  "wall_seconds",
] as const;

export class SchemaError extends Error {}

export interface StudyRow {
  study_label: string;
  scheme: string;
  potential: string;
  nonlinearity: string;
  datum: string;
  norm: string;
  tau: number;
  h: number;
  error: number | null;
  order_local: number | null;
  blown_up: number | null;
  wall_seconds: number;
}

export interface PlotSpec {
  xAxis: "tau" | "h";
  panels: string[];
  guideSlopes: number[];
  title?: string;
}

export function parseStudyCsv(text: string): StudyRow[] {
  const lines = text.split(/\r?\n/).filter((l) => l.length > 0);
  if (lines.length === 0) throw new SchemaError("empty file: no header row");
  const header = lines[0].split(",");
  for (const col of REQUIRED_COLUMNS) {
    if (!header.includes(col)) throw new SchemaError(`missing column: ${col}`);
  }
  const idx = new Map(header.map((name, i) => [name, i]));
  const at = (parts: string[], col: string) => parts[idx.get(col)!] ?? "";
  const num = (s: string): number | null => (s === "" ? null : Number(s));
  return lines.slice(1).map((line) => {
    const parts = line.split(",");
    return {
      study_label: at(parts, "study_label"),
      scheme: at(parts, "scheme"),
      potential: at(parts, "potential"),
      nonlinearity: at(parts, "nonlinearity"),
      datum: at(parts, "datum"),
      norm: at(parts, "norm"),
      tau: Number(at(parts, "tau")),
      h: Number(at(parts, "h")),
      error: num(at(parts, "error")),
      order_local: num(at(parts, "order_local")),
      blown_up: num(at(parts, "blown_up")),
      wall_seconds: Number(at(parts, "wall_seconds")),
    };
  });
}

// pinned style: deterministic palette and layout
const PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];
const PANEL_W = 330;
const PANEL_H = 300;
const ML = 52;
const MR = 14;
const MT = 40;
const MB = 46;

interface Pt {
  x: number;
  y: number | null; // null: blown up
}

interface Series {
  key: string;
  points: Pt[];
}

function esc(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

function groupSeries(rows: StudyRow[], norm: string, xAxis: "tau" | "h"): Series[] {
  const inPanel = rows.filter((r) => r.norm === norm);
  const labels = new Set(inPanel.map((r) => r.study_label));
  const byKey = new Map<string, Pt[]>();
  for (const r of inPanel) {
    const key = labels.size > 1 ? `${r.study_label}/${r.scheme}` : r.scheme;
    if (!byKey.has(key)) byKey.set(key, []);
    const x = xAxis === "tau" ? r.tau : r.h;
    byKey.get(key)!.push({ x, y: r.blown_up !== null ? null : r.error });
  }
  return [...byKey.entries()].map(([key, points]) => ({
    key,
    points: points.slice().sort((a, b) => b.x - a.x),
  }));
}

function decadeTicks(lo: number, hi: number): number[] {
  const ticks: number[] = [];
  for (let e = Math.ceil(lo); e <= Math.floor(hi) + 1e-9; e += 1) ticks.push(e);
  return ticks;
}

function fmtPow10(e: number): string {
  return `1e${e}`;
}

/** Build the SVG figure, or return null when the CSV holds no series. */
export function buildFigure(rows: StudyRow[], spec: PlotSpec): string | null {
  const panels = spec.panels.map((norm) => ({
    norm,
    series: groupSeries(rows, norm, spec.xAxis),
  }));
  if (panels.every((p) => p.series.length === 0)) return null;

  const W = ML + (PANEL_W + MR) * panels.length;
  const H = PANEL_H + MT + MB;
  let s = `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${W} ${H}" `;
  s += `font-family="Helvetica, Arial, sans-serif">\n`;
  s += `<rect width="${W}" height="${H}" fill="#ffffff"/>\n`;
  if (spec.title) {
    s += `<text x="${W / 2}" y="16" font-size="13" text-anchor="middle" `;
    s += `fill="#222">${esc(spec.title)}</text>\n`;
  }

  panels.forEach((panel, ip) => {
    const x0 = ML + ip * (PANEL_W + MR);
    const y0 = MT;
    s += renderPanel(panel.norm, panel.series, spec, x0, y0);
  });
  return s + "</svg>\n";
}

function renderPanel(
  norm: string,
  series: Series[],
  spec: PlotSpec,
  x0: number,
  y0: number
): string {
  const xsAll: number[] = [];
  const ysAll: number[] = [];
  for (const ser of series)
    for (const p of ser.points) {
      xsAll.push(Math.log10(p.x));
      if (p.y !== null && p.y > 0) ysAll.push(Math.log10(p.y));
    }
  if (xsAll.length === 0) return "";
  const xLo = Math.min(...xsAll) - 0.15;
  const xHi = Math.max(...xsAll) + 0.15;
  let yLo = ysAll.length ? Math.min(...ysAll) - 0.4 : -11;
  let yHi = ysAll.length ? Math.max(...ysAll) + 0.4 : 0;
  // room for slope guides that extend above the data
  for (const slope of spec.guideSlopes) yHi = Math.max(yHi, yLo + slope * (xHi - xLo) + 0.4);

  const px = (lx: number) => x0 + ((lx - xLo) / (xHi - xLo)) * PANEL_W;
  const py = (ly: number) => y0 + PANEL_H - ((ly - yLo) / (yHi - yLo)) * PANEL_H;

  let s = `<rect x="${x0}" y="${y0}" width="${PANEL_W}" height="${PANEL_H}" `;
  s += `fill="none" stroke="#444" stroke-width="1"/>\n`;

  for (const e of decadeTicks(xLo, xHi)) {
    const x = px(e);
    s += `<line x1="${x.toFixed(2)}" y1="${y0}" x2="${x.toFixed(2)}" `;
    s += `y2="${y0 + PANEL_H}" stroke="#eee" stroke-width="0.6"/>\n`;
    s += `<text x="${x.toFixed(2)}" y="${y0 + PANEL_H + 14}" font-size="9" `;
    s += `text-anchor="middle" fill="#333">${fmtPow10(e)}</text>\n`;
  }
  for (const e of decadeTicks(yLo, yHi)) {
    const y = py(e);
    s += `<line x1="${x0}" y1="${y.toFixed(2)}" x2="${x0 + PANEL_W}" `;
    s += `y2="${y.toFixed(2)}" stroke="#eee" stroke-width="0.6"/>\n`;
    s += `<text x="${x0 - 4}" y="${(y + 3).toFixed(2)}" font-size="9" `;
    s += `text-anchor="end" fill="#333">${fmtPow10(e)}</text>\n`;
  }

  s += `<text x="${x0 + PANEL_W / 2}" y="${y0 - 8}" font-size="11" `;
  s += `text-anchor="middle" fill="#222">${esc(norm)}-norm error</text>\n`;
  const xLabel = spec.xAxis === "tau" ? "time step tau" : "mesh size h";
  s += `<text x="${x0 + PANEL_W / 2}" y="${y0 + PANEL_H + 30}" font-size="10" `;
  s += `text-anchor="middle" fill="#333">${xLabel}</text>\n`;

  series.forEach((ser, is) => {
    const color = PALETTE[is % PALETTE.length];
    const usable = ser.points.filter((p) => p.y !== null && p.y > 0);
    if (usable.length > 0) {
      const path = usable
        .map((p, i) => `${i === 0 ? "M" : "L"}${px(Math.log10(p.x)).toFixed(2)} ` +
          `${py(Math.log10(p.y!)).toFixed(2)}`)
        .join(" ");
      s += `<path d="${path}" fill="none" stroke="${color}" stroke-width="1.4"/>\n`;
      for (const p of usable) {
        s += `<circle cx="${px(Math.log10(p.x)).toFixed(2)}" `;
        s += `cy="${py(Math.log10(p.y!)).toFixed(2)}" r="3" fill="${color}"/>\n`;
      }
      // dashed order guides anchored at the series' final (finest) point
      const last = usable[usable.length - 1];
      const lx1 = Math.log10(last.x);
      const ly1 = Math.log10(last.y!);
      for (const slope of spec.guideSlopes) {
        const ly0g = ly1 + slope * (xHi - lx1);
        s += `<line class="guide" x1="${px(xHi).toFixed(2)}" y1="${py(ly0g).toFixed(2)}" `;
        s += `x2="${px(lx1).toFixed(2)}" y2="${py(ly1).toFixed(2)}" stroke="${color}" `;
        s += `stroke-width="0.9" stroke-dasharray="5,3" opacity="0.55"/>\n`;
        s += `<text x="${(px(xHi) + 2).toFixed(2)}" y="${py(ly0g).toFixed(2)}" `;
        s += `font-size="8" fill="${color}" opacity="0.8">slope ${slope}</text>\n`;
      }
    }
    // blown-up runs: open markers pinned to the panel floor
    for (const p of ser.points.filter((q) => q.y === null)) {
      s += `<circle class="blown" cx="${px(Math.log10(p.x)).toFixed(2)}" `;
      s += `cy="${(y0 + PANEL_H - 6).toFixed(2)}" r="3.5" fill="none" `;
      s += `stroke="${color}" stroke-width="1.2"/>\n`;
    }
    // legend
    const ly = y0 + 14 + is * 13;
    s += `<line x1="${x0 + 8}" y1="${ly - 3}" x2="${x0 + 26}" y2="${ly - 3}" `;
    s += `stroke="${color}" stroke-width="1.4"/>\n`;
    s += `<text x="${x0 + 30}" y="${ly}" font-size="9" fill="#333">`;
    s += `${esc(ser.key)}</text>\n`;
  });
  return s;
}

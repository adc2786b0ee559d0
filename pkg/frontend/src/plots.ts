/** Pure-string SVG plot builders for the results view.
 *
 * Mirrors the server's figure styles; kept DOM-free so the renderers
 * are unit-testable in node.
 */
import type { AnalysisReport, SurfaceCoefficients } from "./types.js";

const WIDTH = 520;
const HEIGHT = 520;
const MARGIN = 52;

interface Frame {
  xMin: number;
  xMax: number;
  yMin: number;
  yMax: number;
}

function fmt(value: number): string {
  return value.toFixed(2);
}

function makeFrame(xs: number[], ys: number[], pad = 0.1): Frame {
  const xMin = Math.min(...xs);
  const xMax = Math.max(...xs);
  const yMin = Math.min(...ys);
  const yMax = Math.max(...ys);
  const xPad = (xMax - xMin || 1) * pad;
  const yPad = (yMax - yMin || 1) * pad;
  return { xMin: xMin - xPad, xMax: xMax + xPad, yMin: yMin - yPad, yMax: yMax + yPad };
}

function sx(frame: Frame, x: number): number {
  return MARGIN + ((x - frame.xMin) / (frame.xMax - frame.xMin)) * (WIDTH - 2 * MARGIN);
}

function sy(frame: Frame, y: number): number {
  return MARGIN + ((frame.yMax - y) / (frame.yMax - frame.yMin)) * (HEIGHT - 2 * MARGIN);
}

function open(title: string): string {
  return (
    `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${WIDTH} ${HEIGHT}" ` +
    `class="plot" role="img" aria-label="${title}">` +
    `<rect width="${WIDTH}" height="${HEIGHT}" fill="#ffffff"/>` +
    `<text x="${WIDTH / 2}" y="22" text-anchor="middle" font-size="14">${title}</text>`
  );
}

function axesBox(): string {
  return `<rect x="${MARGIN}" y="${MARGIN}" width="${WIDTH - 2 * MARGIN}" height="${HEIGHT - 2 * MARGIN}" fill="none" stroke="#999"/>`;
}

export interface PointInfo {
  id: number;
  x: number;
  y: number;
  tooltip: string;
}

/** Scatter of the perceptual configuration with hover tooltips and
 * optional product thumbnails. */
export function perceptualMapSvg(
  points: PointInfo[],
  stress: number,
  thumbnailUrl?: (id: number) => string,
): string {
  const frame = makeFrame(points.map((p) => p.x), points.map((p) => p.y));
  let body = open(`Perceptual map (stress ${stress.toFixed(3)})`) + axesBox();
  body += `<line x1="${sx(frame, 0)}" y1="${MARGIN}" x2="${sx(frame, 0)}" y2="${HEIGHT - MARGIN}" stroke="#ddd" stroke-dasharray="4 4"/>`;
  body += `<line x1="${MARGIN}" y1="${sy(frame, 0)}" x2="${WIDTH - MARGIN}" y2="${sy(frame, 0)}" stroke="#ddd" stroke-dasharray="4 4"/>`;
  for (const point of points) {
    const cx = sx(frame, point.x);
    const cy = sy(frame, point.y);
    if (thumbnailUrl) {
      body += `<image href="${thumbnailUrl(point.id)}" x="${fmt(cx - 14)}" y="${fmt(cy - 30)}" width="28" height="28" preserveAspectRatio="xMidYMid meet"/>`;
    }
    body +=
      `<g class="product-point" data-product="${point.id}">` +
      `<circle cx="${fmt(cx)}" cy="${fmt(cy)}" r="5" fill="#1f5fa8">` +
      `<title>${point.tooltip}</title></circle>` +
      `<text x="${fmt(cx + 8)}" y="${fmt(cy - 6)}" font-size="10">${point.id}</text></g>`;
  }
  return body + "</svg>";
}

/** Scatter plus the appeal-vector arrow and iso-appeal perpendiculars. */
export function appealVectorSvg(points: PointInfo[], a: number, b: number, rSquared: number): string {
  const frame = makeFrame(points.map((p) => p.x), points.map((p) => p.y));
  const norm = Math.hypot(a, b);
  let body = open(`Appeal vector (R² ${rSquared.toFixed(2)})`) + axesBox();
  if (norm > 0) {
    const ux = a / norm;
    const uy = b / norm;
    const span = Math.max(frame.xMax - frame.xMin, frame.yMax - frame.yMin);
    for (let step = -3; step <= 3; step++) {
      const offset = (step * span) / 6;
      const cx = offset * ux;
      const cy = offset * uy;
      const half = span;
      body += clippedLine(
        frame,
        cx + uy * half, cy - ux * half,
        cx - uy * half, cy + ux * half,
        "#c3d4e8",
      );
    }
    const tipX = ux * span * 0.3;
    const tipY = uy * span * 0.3;
    body += `<line x1="${fmt(sx(frame, 0))}" y1="${fmt(sy(frame, 0))}" x2="${fmt(sx(frame, tipX))}" y2="${fmt(sy(frame, tipY))}" stroke="#c0392b" stroke-width="2.5" marker-end="url(#arrowhead)"/>`;
    body =
      body.slice(0, body.indexOf(axesBox())) +
      `<defs><marker id="arrowhead" markerWidth="8" markerHeight="8" refX="6" refY="3" orient="auto"><path d="M0,0 L6,3 L0,6 Z" fill="#c0392b"/></marker></defs>` +
      body.slice(body.indexOf(axesBox()));
  }
  for (const point of points) {
    const cx = sx(frame, point.x);
    const cy = sy(frame, point.y);
    body +=
      `<circle cx="${fmt(cx)}" cy="${fmt(cy)}" r="4" fill="#1f5fa8">` +
      `<title>${point.tooltip}</title></circle>` +
      `<text x="${fmt(cx + 7)}" y="${fmt(cy - 5)}" font-size="10">${point.id}</text>`;
  }
  return body + "</svg>";
}

function clippedLine(frame: Frame, x1: number, y1: number, x2: number, y2: number, stroke: string): string {
  // sample-based clip, deterministic and dependency-free
  const steps = 256;
  let first: [number, number] | null = null;
  let last: [number, number] | null = null;
  for (let s = 0; s <= steps; s++) {
    const t = s / steps;
    const x = x1 + (x2 - x1) * t;
    const y = y1 + (y2 - y1) * t;
    const inside = x >= frame.xMin && x <= frame.xMax && y >= frame.yMin && y <= frame.yMax;
    if (inside) {
      if (!first) first = [x, y];
      last = [x, y];
    }
  }
  if (!first || !last) return "";
  return `<line x1="${fmt(sx(frame, first[0]))}" y1="${fmt(sy(frame, first[1]))}" x2="${fmt(sx(frame, last[0]))}" y2="${fmt(sy(frame, last[1]))}" stroke="${stroke}"/>`;
}

export function evaluateSurface(c: SurfaceCoefficients, d2: number, d3: number): number {
  return (
    c.c0 +
    c.c_d2 * d2 +
    c.c_d3 * d3 +
    c.c_d2sq * d2 * d2 +
    c.c_d3sq * d3 * d3 +
    c.c_d2d3 * d2 * d3
  );
}

const HEAT_STOPS: [number, [number, number, number]][] = [
  [0.0, [33, 60, 135]],
  [0.25, [70, 135, 200]],
  [0.5, [240, 240, 220]],
  [0.75, [235, 130, 70]],
  [1.0, [180, 30, 40]],
];

export function heatColor(t: number): string {
  const clamped = Math.min(1, Math.max(0, t));
  for (let s = 0; s < HEAT_STOPS.length - 1; s++) {
    const [t0, c0] = HEAT_STOPS[s];
    const [t1, c1] = HEAT_STOPS[s + 1];
    if (clamped <= t1) {
      const f = t1 === t0 ? 0 : (clamped - t0) / (t1 - t0);
      const rgb = c0.map((v, idx) => Math.round(v + f * (c1[idx] - v)));
      return `rgb(${rgb[0]},${rgb[1]},${rgb[2]})`;
    }
  }
  return "rgb(180,30,40)";
}

/** Colormap of the response surface with iso-appeal contour overlay. */
export function surfaceColormapSvg(
  coefficients: SurfaceCoefficients,
  d2Range: [number, number],
  d3Range: [number, number],
  levels: number[],
  resolution = 60,
): string {
  const frame: Frame = { xMin: d2Range[0], xMax: d2Range[1], yMin: d3Range[0], yMax: d3Range[1] };
  const xs = linspace(d2Range[0], d2Range[1], resolution);
  const ys = linspace(d3Range[0], d3Range[1], resolution);
  const values = ys.map((d3) => xs.map((d2) => evaluateSurface(coefficients, d2, d3)));
  const flat = values.flat();
  const lo = Math.min(...flat);
  const hi = Math.max(...flat);
  const span = hi - lo || 1;

  let body = open(`Appeal over (d2, d3) at d1 = ${coefficients.fixed_d1}`);
  const cellW = (WIDTH - 2 * MARGIN) / resolution;
  const cellH = (HEIGHT - 2 * MARGIN) / resolution;
  for (let row = 0; row < resolution; row++) {
    for (let col = 0; col < resolution; col++) {
      const x = MARGIN + col * cellW;
      const y = HEIGHT - MARGIN - (row + 1) * cellH;
      const color = heatColor((values[row][col] - lo) / span);
      body += `<rect x="${fmt(x)}" y="${fmt(y)}" width="${fmt(cellW + 0.5)}" height="${fmt(cellH + 0.5)}" fill="${color}"/>`;
    }
  }
  for (const level of levels) {
    for (const segment of marchingSquares(xs, ys, values, level)) {
      const [p, q] = segment;
      body += `<line x1="${fmt(sx(frame, p[0]))}" y1="${fmt(sy(frame, p[1]))}" x2="${fmt(sx(frame, q[0]))}" y2="${fmt(sy(frame, q[1]))}" stroke="#222" stroke-width="0.8"/>`;
    }
  }
  body += axesBox();
  body += `<text x="${WIDTH / 2}" y="${HEIGHT - 14}" text-anchor="middle" font-size="11">d2 (cm)</text>`;
  body += `<text x="16" y="${HEIGHT / 2}" text-anchor="middle" font-size="11" transform="rotate(-90 16 ${HEIGHT / 2})">d3 (cm)</text>`;
  body += `<text x="${MARGIN}" y="${HEIGHT - MARGIN + 16}" font-size="10">${d2Range[0]}</text>`;
  body += `<text x="${WIDTH - MARGIN}" y="${HEIGHT - MARGIN + 16}" font-size="10" text-anchor="end">${d2Range[1]}</text>`;
  return body + "</svg>";
}

export function linspace(lo: number, hi: number, count: number): number[] {
  if (count === 1) return [(lo + hi) / 2];
  return Array.from({ length: count }, (_, i) => lo + ((hi - lo) * i) / (count - 1));
}

type Segment = [[number, number], [number, number]];

/** Linear-interpolation marching squares; returns raw segments. */
export function marchingSquares(
  xs: number[],
  ys: number[],
  values: number[][],
  level: number,
): Segment[] {
  const segments: Segment[] = [];
  for (let row = 0; row < ys.length - 1; row++) {
    for (let col = 0; col < xs.length - 1; col++) {
      const corners: [number, number, number][] = [
        [xs[col], ys[row], values[row][col]],
        [xs[col + 1], ys[row], values[row][col + 1]],
        [xs[col + 1], ys[row + 1], values[row + 1][col + 1]],
        [xs[col], ys[row + 1], values[row + 1][col]],
      ];
      const crossings: [number, number][] = [];
      for (let edge = 0; edge < 4; edge++) {
        const [x0, y0, v0] = corners[edge];
        const [x1, y1, v1] = corners[(edge + 1) % 4];
        if (v0 > level !== v1 > level) {
          const t = (level - v0) / (v1 - v0);
          crossings.push([x0 + t * (x1 - x0), y0 + t * (y1 - y0)]);
        }
      }
      for (let s = 0; s + 1 < crossings.length; s += 2) {
        segments.push([crossings[s], crossings[s + 1]]);
      }
    }
  }
  return segments;
}

/** Tooltip text for one product in the results plots. */
export function productTooltip(report: AnalysisReport, productId: number, dims: string): string {
  const prediction = report.predictions[String(productId)];
  const residual = prediction.appeal - prediction.predicted;
  return (
    `G${productId} ${dims}\n` +
    `appeal ${prediction.appeal.toFixed(1)}, predicted ${prediction.predicted.toFixed(2)}, ` +
    `residual ${residual.toFixed(2)}`
  );
}

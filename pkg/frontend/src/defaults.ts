/** The bundled 18-glass product set (same dims the server fixtures use). */
import type { ProductSpec } from "./types.js";

const DIMS: [number, number, number][] = [
  [8, 7, 8],
  [8, 7, 9.5],
  [8, 7, 9.5],
  [8, 7, 6],
  [8, 7, 7],
  [8, 7, 9],
  [8, 5, 8],
  [8, 5, 9.5],
  [8, 5, 9.5],
  [8, 5, 6],
  [8, 5, 7],
  [8, 5, 9],
  [8, 3, 8],
  [8, 3, 9.5],
  [8, 3, 9.5],
  [8, 3, 6],
  [8, 3, 7],
  [8, 3, 9],
];

export function defaultProducts(): ProductSpec[] {
  return DIMS.map(([d1, d2, d3], index) => ({
    id: index + 1,
    label: `G${index + 1}`,
    dims: { d1, d2, d3 },
  }));
}

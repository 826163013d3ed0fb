/**
 * Pure overlay math, mirrored cell-for-cell from the server's renderer:
 * same block partition (i * pixels / cells, floored), same threshold rule
 * (normalized >= t), same blend (Math.round of the alpha mix with red).
 * Keep this file dependency-free so it is trivially testable.
 */

export type Grid = number[][]; // normalized CAM values in [0, 1]

export function thresholdMask(grid: Grid, t: number): boolean[][] {
  if (t < 0 || t > 1) throw new RangeError(`threshold ${t} outside [0, 1]`);
  return grid.map((row) => row.map((v) => v >= t));
}

export function activeCells(grid: Grid, t: number): [number, number][] {
  const out: [number, number][] = [];
  const mask = thresholdMask(grid, t);
  for (let r = 0; r < mask.length; r++) {
    for (let c = 0; c < mask[r].length; c++) {
      if (mask[r][c]) out.push([r, c]);
    }
  }
  return out;
}

/** Boundaries splitting [0, nPixels) into nCells contiguous blocks exactly. */
export function blockBounds(nPixels: number, nCells: number): number[] {
  const bounds: number[] = [];
  for (let i = 0; i <= nCells; i++) bounds.push(Math.floor((i * nPixels) / nCells));
  return bounds;
}

export function blendChannel(value: number, red: number, alpha: number): number {
  return Math.round((1 - alpha) * value + alpha * red);
}

/** Blend red into the active blocks of an RGBA pixel buffer, in place. */
export function renderOverlay(
  pixels: Uint8ClampedArray,
  width: number,
  height: number,
  grid: Grid,
  threshold: number,
  alpha: number,
): void {
  if (alpha < 0 || alpha > 1) throw new RangeError(`alpha ${alpha} outside [0, 1]`);
  const mask = thresholdMask(grid, threshold);
  const rowBounds = blockBounds(height, grid.length);
  const colBounds = blockBounds(width, grid[0].length);
  for (let gr = 0; gr < grid.length; gr++) {
    for (let gc = 0; gc < grid[0].length; gc++) {
      if (!mask[gr][gc]) continue;
      for (let y = rowBounds[gr]; y < rowBounds[gr + 1]; y++) {
        for (let x = colBounds[gc]; x < colBounds[gc + 1]; x++) {
          const i = (y * width + x) * 4;
          pixels[i] = blendChannel(pixels[i], 255, alpha);
          pixels[i + 1] = blendChannel(pixels[i + 1], 0, alpha);
          pixels[i + 2] = blendChannel(pixels[i + 2], 0, alpha);
        }
      }
    }
  }
}

/** One-decimal percent, e.g. 0.565 -> "56.5%". */
export function formatPercent(probability: number): string {
  return `${(probability * 100).toFixed(1)}%`;
}

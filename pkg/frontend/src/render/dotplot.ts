/** Drift dot plot: one point per dimension at (hierarchy depth, drift), with
 * point area scaled by drift-change magnitude and a diverging color by sign.
 * Dense regions carry engine-binned heat cells underneath the points. */

import { gradientColor, heatColor } from '../color.js';
import type { DotPlot } from '../types.js';
import { DIAMOND, esc, fallbackSvg, fmt, svg, WIDTH } from './common.js';

const HEIGHT = 420;
const MARGIN = 40;

export interface DotPlotOptions {
  selectedDim?: string | null;
  hoverDim?: string | null;
}

export function renderDotPlot(plot: DotPlot, opts: DotPlotOptions = {}): string {
  try {
    const plotW = WIDTH - 2 * MARGIN;
    const plotH = HEIGHT - 2 * MARGIN;
    // Points carry raw hierarchy depth on x and drift in [0, 1] on y; the heat
    // cells were binned over the same domains, so scale x by max depth + 1 to
    // line the two up.
    const depthDomain = Math.max(...plot.points.map((p) => p.x), 0) + 1;
    const sx = (x: number): number => MARGIN + ((x + 0.5) / depthDomain) * plotW;
    const sy = (y: number): number => HEIGHT - MARGIN - Math.min(y, 1) * plotH;
    const body: string[] = [];

    body.push(
      `<line x1="${MARGIN}" y1="${HEIGHT - MARGIN}" x2="${WIDTH - MARGIN}"` +
        ` y2="${HEIGHT - MARGIN}" stroke="black" class="axis"/>`,
      `<line x1="${MARGIN}" y1="${MARGIN}" x2="${MARGIN}" y2="${HEIGHT - MARGIN}"` +
        ` stroke="black" class="axis"/>`,
      `<text x="${WIDTH / 2}" y="${HEIGHT - 8}" font-size="11" text-anchor="middle">depth</text>`,
      `<text x="12" y="${HEIGHT / 2}" font-size="11" text-anchor="middle"` +
        ` transform="rotate(-90 12 ${HEIGHT / 2})">drift</text>`,
    );

    const maxCount = Math.max(...plot.heat_cells.map((c) => c.count), 1);
    const cellW = plotW / plot.depth_bins;
    const cellH = plotH / plot.value_bins;
    for (const cell of plot.heat_cells) {
      const x = MARGIN + cell.depth_bin * cellW;
      const y = HEIGHT - MARGIN - (cell.value_bin + 1) * cellH;
      body.push(
        `<rect x="${fmt(x)}" y="${fmt(y)}" width="${fmt(cellW)}" height="${fmt(cellH)}"` +
          ` fill="${heatColor(cell.count, maxCount)}" class="heat-cell"` +
          ` data-count="${cell.count}">` +
          `<title>${cell.count} dims: ${esc(cell.dims.join(', '))}</title></rect>`,
      );
    }

    const hover = opts.hoverDim ?? null;
    const hovered = hover ? plot.points.find((p) => p.dim === hover) : undefined;
    const related = new Set<string>();
    if (hovered) {
      for (const d of hovered.ancestors) related.add(d);
      for (const d of hovered.salient_descendants) related.add(d);
    }

    for (const point of plot.points) {
      const r = Math.max(2.5, 10 * Math.sqrt(point.size));
      const classes = [
        'dot',
        opts.selectedDim === point.dim ? 'selected' : '',
        point.dim === hover ? 'hovered' : '',
        related.has(point.dim) ? 'related' : '',
      ]
        .filter(Boolean)
        .join(' ');
      const marker = point.constrained ? ` ${DIAMOND}` : '';
      body.push(
        `<circle cx="${fmt(sx(point.x))}" cy="${fmt(sy(point.y))}" r="${fmt(r)}"` +
          ` fill="${gradientColor(point.sign * point.size)}" stroke="black"` +
          ` stroke-width="${opts.selectedDim === point.dim ? 2 : 0.5}"` +
          ` class="${classes}" data-dim="${esc(point.dim)}">` +
          `<title>${esc(point.dim)}${marker} H=${point.y.toFixed(4)}</title></circle>`,
      );
    }

    return svg(HEIGHT, body, 'dotplot-view');
  } catch (err) {
    return fallbackSvg(err instanceof Error ? err.message : String(err));
  }
}

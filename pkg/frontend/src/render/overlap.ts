/** Baseline/focus overlap glyph: two circles with area proportional to cohort
 * size, positioned nested, overlapping, or apart per the service-reported
 * relationship. */

import type { OverlapSummary } from '../types.js';
import { fallbackSvg, fmt, svg } from './common.js';

const HEIGHT = 160;
const MAX_RADIUS = 55;

export function renderOverlap(summary: OverlapSummary): string {
  try {
    const maxSize = Math.max(summary.size_a, summary.size_b, 1);
    const rA = MAX_RADIUS * Math.sqrt(summary.size_a / maxSize);
    const rB = MAX_RADIUS * Math.sqrt(summary.size_b / maxSize);
    const cy = HEIGHT / 2;
    let cxA: number;
    let cxB: number;
    if (summary.relationship === 'subset') {
      cxA = 200;
      cxB = 200 + (rA - rB) * 0.6;
    } else if (summary.relationship === 'partial') {
      const gap = (rA + rB) * 0.6;
      cxA = 200 - gap / 2;
      cxB = 200 + gap / 2;
    } else {
      cxA = 200 - rA - 20;
      cxB = 200 + rB + 20;
    }
    const body = [
      `<circle cx="${fmt(cxA)}" cy="${fmt(cy)}" r="${fmt(rA)}"` +
        ` fill="rgb(110,110,110)" fill-opacity="0.55" stroke="black" class="cohort-a">` +
        `<title>baseline: ${summary.size_a}</title></circle>`,
      `<circle cx="${fmt(cxB)}" cy="${fmt(cy)}" r="${fmt(rB)}"` +
        ` fill="rgb(200,30,30)" fill-opacity="0.55" stroke="black" class="cohort-b">` +
        `<title>focus: ${summary.size_b}</title></circle>`,
      `<text x="330" y="${fmt(cy - 10)}" font-size="12">${summary.relationship}</text>`,
      `<text x="330" y="${fmt(cy + 10)}" font-size="11">shared patients:` +
        ` ${summary.size_intersection}</text>`,
    ];
    return svg(HEIGHT, body, 'overlap-view');
  } catch (err) {
    return fallbackSvg(err instanceof Error ? err.message : String(err));
  }
}

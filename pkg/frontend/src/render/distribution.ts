/** Per-dimension distribution comparison: baseline and focus drawn as paired
 * horizontal bars (binary/categorical) or paired histograms (numeric bins),
 * with raw counts in the tooltips. Everything shown comes from the service. */

import type { CohortDistribution, DimensionPayload } from '../types.js';
import { esc, fallbackSvg, fmt, svg, WIDTH } from './common.js';

const BASELINE_FILL = 'rgb(110,110,110)';
const FOCUS_FILL = 'rgb(200,30,30)';
const ROW_HEIGHT = 38;
const BAR_HEIGHT = 14;
const LABEL_WIDTH = 180;

function pairedBars(payload: DimensionPayload): string[] {
  const { baseline, focus } = payload;
  const body: string[] = [];
  const barSpan = WIDTH - LABEL_WIDTH - 70;
  baseline.support.forEach((label, i) => {
    const y = i * ROW_HEIGHT + 16;
    const pB = baseline.probs[i] ?? 0;
    const pF = focus.probs[i] ?? 0;
    body.push(
      `<text x="${LABEL_WIDTH - 8}" y="${fmt(y + BAR_HEIGHT + 2)}" font-size="11"` +
        ` text-anchor="end">${esc(label)}</text>`,
      `<rect x="${LABEL_WIDTH}" y="${fmt(y)}" width="${fmt(pB * barSpan)}"` +
        ` height="${BAR_HEIGHT}" fill="${BASELINE_FILL}" class="baseline-bar">` +
        `<title>baseline ${esc(label)}: ${baseline.counts[i] ?? 0}/${baseline.size}` +
        ` (${(pB * 100).toFixed(1)}%)</title></rect>`,
      `<rect x="${LABEL_WIDTH}" y="${fmt(y + BAR_HEIGHT + 4)}" width="${fmt(pF * barSpan)}"` +
        ` height="${BAR_HEIGHT}" fill="${FOCUS_FILL}" class="focus-bar">` +
        `<title>focus ${esc(label)}: ${focus.counts[i] ?? 0}/${focus.size}` +
        ` (${(pF * 100).toFixed(1)}%)</title></rect>`,
    );
  });
  return body;
}

function isDegenerate(dist: CohortDistribution): boolean {
  return dist.size === 0 || dist.support.length === 0;
}

export function renderDistribution(payload: DimensionPayload): string {
  try {
    if (isDegenerate(payload.baseline) || isDegenerate(payload.focus)) {
      return svg(40, [
        `<text x="10" y="24" font-size="13" class="degenerate">` +
          `${esc(payload.label)}: one cohort has no observations</text>`,
      ]);
    }
    if (payload.baseline.support.length !== payload.focus.support.length) {
      throw new Error('baseline and focus supports differ');
    }
    const body = [
      `<text x="10" y="12" font-size="12" font-weight="bold">${esc(payload.label)}` +
        ` (${esc(payload.baseline.kind)})</text>`,
      `<rect x="${WIDTH - 170}" y="4" width="10" height="10" fill="${BASELINE_FILL}"/>`,
      `<text x="${WIDTH - 155}" y="13" font-size="10">baseline (n=${payload.baseline.size})</text>`,
      `<rect x="${WIDTH - 70}" y="4" width="10" height="10" fill="${FOCUS_FILL}"/>`,
      `<text x="${WIDTH - 55}" y="13" font-size="10">focus (n=${payload.focus.size})</text>`,
      ...pairedBars(payload),
    ];
    return svg(payload.baseline.support.length * ROW_HEIGHT + 20, body, 'distribution-view');
  } catch (err) {
    return fallbackSvg(err instanceof Error ? err.message : String(err));
  }
}

/** Ranked list view: HTML rows sorted by the service, each with a drift bar,
 * the human label, and a diamond marker on constrained dimensions. */

import { driftColor } from '../color.js';
import type { ListRowPayload } from '../types.js';
import { DIAMOND, esc } from './common.js';

export interface ListOptions {
  selectedDim?: string | null;
}

export function renderList(rows: ListRowPayload[], opts: ListOptions = {}): string {
  try {
    const maxValue = Math.max(...rows.map((r) => r.value), 1e-12);
    const items = rows.map((row) => {
      const pct = ((row.value / maxValue) * 100).toFixed(1);
      const classes = ['list-row', opts.selectedDim === row.dim ? 'selected' : '']
        .filter(Boolean)
        .join(' ');
      const marker = row.constrained
        ? ` <span class="constrained-marker" title="constrained">${DIAMOND}</span>`
        : '';
      return (
        `<li class="${classes}" data-dim="${esc(row.dim)}">` +
        `<span class="bar" style="width:${pct}%;background:${driftColor(row.value, maxValue)}">` +
        `</span>` +
        `<span class="label">${esc(row.label)}${marker}</span>` +
        `<span class="dim">${esc(row.dim)}</span>` +
        `<span class="value">${row.value.toFixed(4)}</span>` +
        `</li>`
      );
    });
    return `<ol class="list-view">\n${items.join('\n')}\n</ol>\n`;
  } catch (err) {
    const message = err instanceof Error ? err.message : String(err);
    return `<p class="render-error">unable to render: ${esc(message)}</p>\n`;
  }
}

/** Split icicle view: engine-provided fragment/group geometry drawn as-is.
 * Split fragments carry a data-split id so hover can link the peers of one
 * logical node with dashed connectors; groups render at reduced height. */

import { driftColor } from '../color.js';
import type { Fragment, IcicleLayout } from '../types.js';
import { DIAMOND, esc, fmt, svg, WIDTH } from './common.js';

export interface IcicleOptions {
  rowHeight?: number;
  selectedDim?: string | null;
  hoverSplit?: number | null;
}

function fragmentRect(
  frag: Fragment,
  col: number,
  rowHeight: number,
  colorMax: number,
  opts: IcicleOptions,
  heightRatio = 1,
  groupId: number | null = null,
): string {
  const x = frag.depth * col;
  const fullHeight = frag.row_span * rowHeight;
  const h = fullHeight * heightRatio;
  const y = frag.row_start * rowHeight + (fullHeight - h) / 2;
  const selected = opts.selectedDim === frag.dim;
  const hovered = opts.hoverSplit !== null && opts.hoverSplit === frag.split_group;
  const classes = [
    frag.salient ? 'salient' : 'grouped',
    selected ? 'selected' : '',
    hovered ? 'split-peer' : '',
  ]
    .filter(Boolean)
    .join(' ');
  const stroke = frag.salient
    ? ' stroke="black" stroke-width="1.5"'
    : ' stroke="white" stroke-width="0.5"';
  const dataAttrs =
    ` data-dim="${esc(frag.dim)}"` +
    (frag.split_group !== null ? ` data-split="${frag.split_group}"` : '') +
    (groupId !== null ? ` data-group="${groupId}"` : '');
  const marker = frag.constrained
    ? `\n<text x="${fmt(x + 3)}" y="${fmt(y + Math.min(h, rowHeight) - 3)}"` +
      ` font-size="10">${DIAMOND}</text>`
    : '';
  return (
    `<rect x="${fmt(x)}" y="${fmt(y)}" width="${fmt(col)}" height="${fmt(h)}"` +
    ` fill="${driftColor(frag.value, colorMax)}"${stroke} class="${classes}"${dataAttrs}>` +
    `<title>${esc(frag.dim)} H=${frag.value.toFixed(4)}</title></rect>` +
    marker
  );
}

export function renderIcicle(layout: IcicleLayout, opts: IcicleOptions = {}): string {
  const rowHeight = opts.rowHeight ?? 14;
  const nrows = layout.rows.length;
  const maxDepth = Math.max(...layout.rows.map((r) => r.nodes.length), 1);
  const col = WIDTH / maxDepth;
  const body: string[] = [];

  for (const frag of layout.fragments) {
    body.push(fragmentRect(frag, col, rowHeight, layout.color_max, opts));
  }
  for (const group of layout.groups) {
    const ratio = group.reduced_height ? group.height_ratio : 1;
    for (const member of group.members) {
      body.push(
        fragmentRect(
          { ...member, value: group.value },
          col,
          rowHeight,
          layout.color_max,
          opts,
          ratio,
          group.id,
        ),
      );
    }
  }

  // Dashed connectors between the split fragments of the hovered node.
  if (opts.hoverSplit !== null && opts.hoverSplit !== undefined) {
    const peers = layout.fragments
      .filter((f) => f.split_group === opts.hoverSplit)
      .sort((a, b) => a.row_start - b.row_start);
    for (let i = 1; i < peers.length; i += 1) {
      const prev = peers[i - 1]!;
      const next = peers[i]!;
      const x = prev.depth * col + col / 2;
      body.push(
        `<line x1="${fmt(x)}" y1="${fmt((prev.row_start + prev.row_span) * rowHeight)}"` +
          ` x2="${fmt(next.depth * col + col / 2)}" y2="${fmt(next.row_start * rowHeight)}"` +
          ` stroke="black" stroke-dasharray="4 3" class="split-link"/>`,
      );
    }
  }

  return svg(nrows * rowHeight, body, 'icicle-view');
}

/** Expanded view of one group: classic icicle rectangles from the service. */
export function renderExpandedGroup(fragments: Fragment[], colorMax: number): string {
  if (fragments.length === 0) return svg(14, [], 'icicle-expanded');
  const minDepth = Math.min(...fragments.map((f) => f.depth));
  const maxDepth = Math.max(...fragments.map((f) => f.depth));
  const rows = Math.max(...fragments.map((f) => f.row_start + f.row_span));
  const col = WIDTH / (maxDepth - minDepth + 1);
  const rowHeight = 14;
  const body = fragments.map((f) =>
    fragmentRect({ ...f, depth: f.depth - minDepth }, col, rowHeight, colorMax, {}),
  );
  return svg(rows * rowHeight, body, 'icicle-expanded');
}

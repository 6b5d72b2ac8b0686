/** Provenance-tree view: node-link diagram with circle area proportional to
 * cohort size, drift-colored filter edges, baseline/focus icons, and a
 * diagonal slash over excluded cohorts. */

import { driftColor, gradientColor } from '../color.js';
import type { TreeSummary } from '../types.js';
import { esc, fallbackSvg, fmt, svg, WIDTH } from './common.js';

const LEVEL_HEIGHT = 90;
const MAX_RADIUS = 26;

interface Placed {
  id: number;
  x: number;
  y: number;
  depth: number;
}

function placeNodes(tree: TreeSummary): Map<number, Placed> {
  const children = new Map<number, number[]>();
  const byId = new Map(tree.nodes.map((n) => [n.id, n]));
  for (const n of tree.nodes) {
    if (!n.visible) continue;
    if (n.parent !== null) {
      const siblings = children.get(n.parent) ?? [];
      siblings.push(n.id);
      children.set(n.parent, siblings);
    }
  }
  const placed = new Map<number, Placed>();
  let nextLeafX = 0;
  const place = (id: number, depth: number): number => {
    const kids = (children.get(id) ?? []).sort((a, b) => a - b);
    let x: number;
    if (kids.length === 0) {
      x = nextLeafX;
      nextLeafX += 1;
    } else {
      const xs = kids.map((k) => place(k, depth + 1));
      x = (Math.min(...xs) + Math.max(...xs)) / 2;
    }
    placed.set(id, { id, x, y: depth * LEVEL_HEIGHT + MAX_RADIUS + 14, depth });
    return x;
  };
  if (!byId.has(tree.root)) throw new Error(`root cohort ${tree.root} missing from nodes`);
  place(tree.root, 0);
  // Spread unit x positions across the drawing width.
  const span = Math.max(nextLeafX - 1, 1);
  for (const p of placed.values()) {
    p.x = 60 + (p.x / span) * (WIDTH - 120);
  }
  return placed;
}

export function renderTree(tree: TreeSummary): string {
  try {
    const placed = placeNodes(tree);
    const byId = new Map(tree.nodes.map((n) => [n.id, n]));
    const maxSize = Math.max(...tree.nodes.map((n) => n.size), 1);
    const maxDrift = Math.max(...tree.nodes.filter((n) => n.visible).map((n) => n.h_avg), 0);
    const body: string[] = [];

    for (const edge of tree.edges) {
      const a = placed.get(edge.parent);
      const b = placed.get(edge.child);
      if (!a || !b) continue;
      body.push(
        `<line x1="${fmt(a.x)}" y1="${fmt(a.y)}" x2="${fmt(b.x)}" y2="${fmt(b.y)}"` +
          ` stroke="${gradientColor(edge.delta_h_avg)}" stroke-width="2.5"` +
          ` data-child="${edge.child}">` +
          `<title>${esc(edge.operator ?? '')} ΔH_avg=${edge.delta_h_avg.toFixed(4)}</title>` +
          `</line>`,
      );
    }

    for (const p of placed.values()) {
      const node = byId.get(p.id);
      if (!node) continue;
      const r = Math.max(4, MAX_RADIUS * Math.sqrt(node.size / maxSize));
      const fill = driftColor(node.h_avg, maxDrift);
      const tooltip =
        `cohort ${node.id}: ${node.size} patients` +
        (node.operator ? `, ${node.operator} (${node.polarity})` : '') +
        `, H_avg=${node.h_avg.toFixed(4)}`;
      body.push(
        `<circle cx="${fmt(p.x)}" cy="${fmt(p.y)}" r="${fmt(r)}" fill="${fill}"` +
          ` stroke="black" stroke-width="1" data-cohort="${node.id}">` +
          `<title>${esc(tooltip)}</title></circle>`,
      );
      if (node.polarity === 'excluded') {
        body.push(
          `<line x1="${fmt(p.x - r)}" y1="${fmt(p.y + r)}" x2="${fmt(p.x + r)}"` +
            ` y2="${fmt(p.y - r)}" stroke="black" stroke-width="2" class="excluded-slash"/>`,
        );
      }
      if (node.is_baseline) {
        body.push(
          `<rect x="${fmt(p.x - r - 14)}" y="${fmt(p.y - 5)}" width="10" height="10"` +
            ` fill="black" class="baseline-icon"><title>baseline</title></rect>`,
        );
      }
      if (node.is_focus) {
        const x = p.x + r + 4;
        body.push(
          `<path d="M ${fmt(x)} ${fmt(p.y + 5)} L ${fmt(x + 10)} ${fmt(p.y + 5)}` +
            ` L ${fmt(x + 5)} ${fmt(p.y - 5)} Z" fill="black" class="focus-icon">` +
            `<title>focus</title></path>`,
        );
      }
      body.push(
        `<text x="${fmt(p.x)}" y="${fmt(p.y + r + 12)}" font-size="10"` +
          ` text-anchor="middle">${node.size}</text>`,
      );
    }

    const depth = Math.max(...[...placed.values()].map((p) => p.depth), 0);
    return svg((depth + 1) * LEVEL_HEIGHT + 2 * MAX_RADIUS, body, 'tree-view');
  } catch (err) {
    return fallbackSvg(err instanceof Error ? err.message : String(err));
  }
}

/** Golden-snapshot tests: every view rendered from recorded service payloads
 * must produce byte-identical markup, and malformed payloads must fall back to
 * an error placeholder instead of throwing. */

import { describe, expect, it } from 'vitest';

import { renderDistribution } from '../src/render/distribution.js';
import { renderDotPlot } from '../src/render/dotplot.js';
import { renderExpandedGroup, renderIcicle } from '../src/render/icicle.js';
import { renderList } from '../src/render/list.js';
import { renderOverlap } from '../src/render/overlap.js';
import { renderTree } from '../src/render/tree.js';
import type {
  DimensionPayload,
  DotPlot,
  Fragment,
  IcicleLayout,
  ListRowPayload,
  OverlapSummary,
  TreeSummary,
} from '../src/types.js';

import dimensionBinary from './fixtures/dimension_binary.json';
import dimensionCategorical from './fixtures/dimension_categorical.json';
import dimensionNumeric from './fixtures/dimension_numeric.json';
import dotplot from './fixtures/dotplot.json';
import expandedGroup from './fixtures/expanded_group.json';
import icicle from './fixtures/icicle_ts_0.05.json';
import icicleHighTs from './fixtures/icicle_ts_0.2.json';
import list from './fixtures/list.json';
import overlap from './fixtures/overlap.json';
import tree from './fixtures/tree.json';
import treeRootOnly from './fixtures/tree_root_only.json';

describe('tree view', () => {
  it('matches the golden snapshot', () => {
    expect(renderTree(tree as TreeSummary)).toMatchSnapshot();
  });

  it('renders a single root cohort', () => {
    const markup = renderTree(treeRootOnly as TreeSummary);
    expect(markup).toContain('data-cohort="0"');
    expect(markup).toMatchSnapshot();
  });

  it('marks baseline, focus, and excluded cohorts', () => {
    const markup = renderTree(tree as TreeSummary);
    expect(markup).toContain('class="baseline-icon"');
    expect(markup).toContain('class="focus-icon"');
  });

  it('falls back on a malformed payload', () => {
    const broken = { ...(tree as TreeSummary), root: 999 };
    expect(renderTree(broken)).toContain('unable to render');
  });
});

describe('split icicle view', () => {
  it('matches the golden snapshot', () => {
    expect(renderIcicle(icicle as IcicleLayout)).toMatchSnapshot();
  });

  it('matches the golden snapshot at a higher threshold', () => {
    expect(renderIcicle(icicleHighTs as IcicleLayout)).toMatchSnapshot();
  });

  it('outlines salient fragments and marks constrained ones', () => {
    const markup = renderIcicle(icicle as IcicleLayout);
    expect(markup).toContain('stroke="black" stroke-width="1.5"');
    expect(markup).toContain('◆');
  });

  it('highlights the selected dimension across fragments', () => {
    const layout = icicle as IcicleLayout;
    const dim = layout.fragments[0]!.dim;
    const markup = renderIcicle(layout, { selectedDim: dim });
    expect(markup).toContain('class="salient selected"');
  });

  it('renders an expanded group from service geometry', () => {
    const markup = renderExpandedGroup(expandedGroup as Fragment[], 0.55);
    expect(markup).toMatchSnapshot();
  });
});

describe('dot plot view', () => {
  it('matches the golden snapshot', () => {
    expect(renderDotPlot(dotplot as DotPlot)).toMatchSnapshot();
  });

  it('links ancestors of the hovered dimension', () => {
    // Give one point another as ancestor so the relation is visible among the
    // rendered dots (in the recorded fixture the ancestors are grouped dims).
    const plot = dotplot as DotPlot;
    const [first, second] = [plot.points[0]!, plot.points[1]!];
    const linked: DotPlot = {
      ...plot,
      points: [first, { ...second, ancestors: [first.dim] }, ...plot.points.slice(2)],
    };
    const markup = renderDotPlot(linked, { hoverDim: second.dim });
    expect(markup).toContain('class="dot hovered"');
    expect(markup).toContain('class="dot related"');
  });

  it('falls back on a malformed payload', () => {
    const broken = { ...(dotplot as DotPlot), points: null } as unknown as DotPlot;
    expect(renderDotPlot(broken)).toContain('unable to render');
  });
});

describe('list view', () => {
  it('matches the golden snapshot', () => {
    expect(renderList(list as ListRowPayload[])).toMatchSnapshot();
  });

  it('marks the selected row', () => {
    const rows = list as ListRowPayload[];
    const markup = renderList(rows, { selectedDim: rows[1]!.dim });
    expect(markup).toContain('class="list-row selected"');
  });

  it('marks constrained dimensions with a diamond', () => {
    expect(renderList(list as ListRowPayload[])).toContain('◆');
  });
});

describe('distribution view', () => {
  it('matches the binary golden snapshot', () => {
    expect(renderDistribution(dimensionBinary as DimensionPayload)).toMatchSnapshot();
  });

  it('matches the categorical golden snapshot', () => {
    expect(renderDistribution(dimensionCategorical as DimensionPayload)).toMatchSnapshot();
  });

  it('matches the numeric-binned golden snapshot', () => {
    expect(renderDistribution(dimensionNumeric as DimensionPayload)).toMatchSnapshot();
  });

  it('shows counts alongside probabilities', () => {
    const markup = renderDistribution(dimensionBinary as DimensionPayload);
    expect(markup).toMatch(/baseline present: \d+\/\d+/);
  });

  it('reports a degenerate cohort instead of drawing bars', () => {
    const payload = dimensionBinary as DimensionPayload;
    const broken = { ...payload, focus: { ...payload.focus, size: 0 } };
    expect(renderDistribution(broken)).toContain('no observations');
  });
});

describe('overlap view', () => {
  it('matches the golden snapshot', () => {
    expect(renderOverlap(overlap as OverlapSummary)).toMatchSnapshot();
  });

  it('reports the relationship and shared count', () => {
    const markup = renderOverlap(overlap as OverlapSummary);
    expect(markup).toContain('subset');
    expect(markup).toContain('shared patients: 5');
  });
});

/** Selection made in any view must be visible from every other view: the
 * store is the single source of truth for the selected dimension and tab. */

import { describe, expect, it } from 'vitest';

import { renderDotPlot } from '../src/render/dotplot.js';
import { renderIcicle } from '../src/render/icicle.js';
import { renderList } from '../src/render/list.js';
import { INITIAL_STATE, Store } from '../src/state.js';
import type { DotPlot, IcicleLayout, ListRowPayload } from '../src/types.js';

import dotplot from './fixtures/dotplot.json';
import icicle from './fixtures/icicle_ts_0.05.json';
import list from './fixtures/list.json';

describe('view-state store', () => {
  it('starts from the documented defaults', () => {
    expect(new Store().get()).toEqual(INITIAL_STATE);
  });

  it('notifies subscribers on every change', () => {
    const store = new Store();
    const seen: (string | null)[] = [];
    store.subscribe((s) => seen.push(s.selectedDim));
    store.selectDimension('icd:A1');
    store.selectDimension(null);
    expect(seen).toEqual(['icd:A1', null]);
  });

  it('unsubscribes cleanly', () => {
    const store = new Store();
    let calls = 0;
    const off = store.subscribe(() => (calls += 1));
    store.switchTab('list');
    off();
    store.switchTab('dotplot');
    expect(calls).toBe(1);
  });

  it('keeps dimension selection when switching tabs', () => {
    const store = new Store();
    store.selectDimension('icd:A1');
    store.switchTab('dotplot');
    store.switchTab('list');
    expect(store.get().selectedDim).toBe('icd:A1');
  });
});

describe('linked selection across views', () => {
  it('one selected dimension highlights in icicle, dot plot, and list', () => {
    const store = new Store();
    const dim = (icicle as IcicleLayout).fragments[0]!.dim;
    store.selectDimension(dim);
    const { selectedDim } = store.get();

    const icicleMarkup = renderIcicle(icicle as IcicleLayout, { selectedDim });
    const dotplotMarkup = renderDotPlot(dotplot as DotPlot, { selectedDim });
    const listMarkup = renderList(list as ListRowPayload[], { selectedDim });

    expect(icicleMarkup).toContain('selected');
    expect(dotplotMarkup).toContain(`stroke-width="2" class="dot selected"`);
    expect(listMarkup).toContain('class="list-row selected"');
  });
});

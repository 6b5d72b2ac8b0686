/** Page wiring: tabs, the saliency-threshold slider, and the shared selection
 * store. Every view re-renders from the latest service payloads; no metric or
 * layout computation happens in the browser. */

import { ApiClient } from './api.js';
import type { Method, Tab } from './state.js';
import { Store } from './state.js';
import { renderDistribution } from './render/distribution.js';
import { renderDotPlot } from './render/dotplot.js';
import { renderIcicle } from './render/icicle.js';
import { renderList } from './render/list.js';
import { renderOverlap } from './render/overlap.js';
import { renderTree } from './render/tree.js';
import type { DotPlot, IcicleLayout, ListRowPayload } from './types.js';

interface Elements {
  tree: HTMLElement;
  main: HTMLElement;
  distribution: HTMLElement;
  overlap: HTMLElement;
  tabs: HTMLElement;
  slider: HTMLInputElement;
  sliderLabel: HTMLElement;
  method: HTMLSelectElement;
}

export class App {
  private icicle: IcicleLayout | null = null;
  private dotplot: DotPlot | null = null;
  private list: ListRowPayload[] | null = null;

  constructor(
    private readonly api: ApiClient,
    readonly store: Store,
    private readonly el: Elements,
  ) {
    store.subscribe(() => this.renderMain());
    el.slider.addEventListener('change', () => {
      void this.setThreshold(Number(el.slider.value));
    });
    el.method.addEventListener('change', () => {
      void this.setMethod(el.method.value as Method);
    });
    el.tabs.addEventListener('click', (ev) => {
      const tab = (ev.target as HTMLElement).dataset['tab'] as Tab | undefined;
      if (tab) store.switchTab(tab);
    });
    el.main.addEventListener('click', (ev) => {
      const dim = (ev.target as HTMLElement).dataset['dim'];
      if (dim) void this.selectDimension(dim);
    });
  }

  async open(hierarchy: string, patients: string): Promise<void> {
    const created = await this.api.createSession(hierarchy, patients);
    this.store.set({ session: created.session });
    this.el.tree.innerHTML = renderTree(created.tree);
    await this.refreshLayouts();
  }

  private sid(): string {
    const sid = this.store.get().session;
    if (!sid) throw new Error('no open session');
    return sid;
  }

  async setThreshold(tS: number): Promise<void> {
    await this.api.setSettings(this.sid(), { t_s: tS });
    this.store.set({ tS });
    this.el.sliderLabel.textContent = tS.toFixed(2);
    await this.refreshLayouts();
  }

  async setMethod(method: Method): Promise<void> {
    await this.api.setSettings(this.sid(), { method });
    this.store.set({ method });
    await this.refreshLayouts();
  }

  async selectDimension(dim: string): Promise<void> {
    this.store.selectDimension(dim);
    const payload = await this.api.dimension(this.sid(), dim);
    this.el.distribution.innerHTML = renderDistribution(payload);
  }

  async refreshLayouts(): Promise<void> {
    const sid = this.sid();
    const [icicle, dotplot, list, overlap] = await Promise.all([
      this.api.icicle(sid),
      this.api.dotplot(sid),
      this.api.list(sid),
      this.api.overlap(sid),
    ]);
    // A superseded threshold change may resolve after a newer one; keep the
    // views on whatever layout was requested last.
    if (!icicle.stale) this.icicle = icicle.payload;
    this.dotplot = dotplot;
    this.list = list;
    this.el.overlap.innerHTML = renderOverlap(overlap);
    this.renderMain();
  }

  renderMain(): void {
    const { tab, selectedDim, hover } = this.store.get();
    for (const button of Array.from(this.el.tabs.querySelectorAll('[data-tab]'))) {
      button.classList.toggle('active', (button as HTMLElement).dataset['tab'] === tab);
    }
    if (tab === 'icicle' && this.icicle) {
      const hoverSplit = hover ? this.splitGroupOf(hover) : null;
      this.el.main.innerHTML = renderIcicle(this.icicle, { selectedDim, hoverSplit });
    } else if (tab === 'dotplot' && this.dotplot) {
      this.el.main.innerHTML = renderDotPlot(this.dotplot, { selectedDim, hoverDim: hover });
    } else if (tab === 'list' && this.list) {
      this.el.main.innerHTML = renderList(this.list, { selectedDim });
    }
  }

  private splitGroupOf(dim: string): number | null {
    const frag = this.icicle?.fragments.find((f) => f.dim === dim);
    return frag?.split_group ?? null;
  }
}

export function mount(base: string): App {
  const byId = (id: string): HTMLElement => {
    const node = document.getElementById(id);
    if (!node) throw new Error(`missing #${id}`);
    return node;
  };
  return new App(new ApiClient(base), new Store(), {
    tree: byId('tree'),
    main: byId('main'),
    distribution: byId('distribution'),
    overlap: byId('overlap'),
    tabs: byId('tabs'),
    slider: byId('ts-slider') as HTMLInputElement,
    sliderLabel: byId('ts-value'),
    method: byId('method') as HTMLSelectElement,
  });
}

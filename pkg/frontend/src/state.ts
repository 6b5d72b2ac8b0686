/** Single view-state store: the selected dimension, tab, threshold, and hover
 * target live here so selection stays synchronized across every view. */

export type Tab = 'icicle' | 'dotplot' | 'list';
export type Method = 'breadth-first' | 'depth-first';

export interface ViewState {
  session: string | null;
  tab: Tab;
  selectedDim: string | null;
  tS: number;
  method: Method;
  hover: string | null;
}

export const INITIAL_STATE: ViewState = {
  session: null,
  tab: 'icicle',
  selectedDim: null,
  tS: 0.05,
  method: 'breadth-first',
  hover: null,
};

type Listener = (state: ViewState) => void;

export class Store {
  private state: ViewState;
  private listeners = new Set<Listener>();

  constructor(initial: Partial<ViewState> = {}) {
    this.state = { ...INITIAL_STATE, ...initial };
  }

  get(): ViewState {
    return this.state;
  }

  set(patch: Partial<ViewState>): void {
    this.state = { ...this.state, ...patch };
    for (const fn of this.listeners) fn(this.state);
  }

  subscribe(fn: Listener): () => void {
    this.listeners.add(fn);
    return () => this.listeners.delete(fn);
  }

  /** Selecting a dimension anywhere selects it everywhere. */
  selectDimension(dim: string | null): void {
    this.set({ selectedDim: dim });
  }

  switchTab(tab: Tab): void {
    this.set({ tab });
  }
}

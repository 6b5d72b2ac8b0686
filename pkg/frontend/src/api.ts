/** Typed client for the analysis service. All server calls go through here;
 * layout requests carry a version stamp so responses superseded by a newer
 * threshold change are discarded instead of overwriting fresh state. */

import type {
  DimensionPayload,
  DotPlot,
  DriftProfilePayload,
  Fragment,
  IcicleLayout,
  ListRowPayload,
  OverlapSummary,
  Settings,
  TreeSummary,
} from './types.js';

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(readonly status: number, detail: string) {
    super(detail);
  }
}

export interface FilterStep {
  parent: number;
  kind: 'event-present' | 'event-absent' | 'attribute-equals' | 'attribute-range';
  target: string;
  value?: unknown;
}

/** A layout response plus whether it is still the newest one requested. */
export interface Versioned<T> {
  payload: T;
  stale: boolean;
}

export class ApiClient {
  private layoutVersion = 0;

  constructor(
    private readonly base: string,
    private readonly fetchFn: FetchLike = (url, init) => fetch(url, init),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchFn(`${this.base}${path}`, init);
    if (!response.ok) {
      let detail = response.statusText;
      try {
        detail = ((await response.json()) as { detail?: string }).detail ?? detail;
      } catch {
        /* non-JSON error body */
      }
      throw new ApiError(response.status, detail);
    }
    return (await response.json()) as T;
  }

  private post<T>(path: string, body: unknown, method = 'POST'): Promise<T> {
    return this.request<T>(path, {
      method,
      headers: { 'content-type': 'application/json' },
      body: JSON.stringify(body),
    });
  }

  createSession(hierarchy: string, patients: string, log?: unknown[]) {
    return this.post<{ session: string; tree: TreeSummary }>('/sessions', {
      hierarchy,
      patients,
      ...(log ? { log } : {}),
    });
  }

  applyFilter(sid: string, step: FilterStep) {
    return this.post<{ included: number; excluded: number; tree: TreeSummary }>(
      `/sessions/${sid}/cohorts`,
      step,
    );
  }

  setBaseline(sid: string, cohort: number) {
    return this.post<{ tree: TreeSummary }>(`/sessions/${sid}/baseline`, { cohort }, 'PUT');
  }

  setFocus(sid: string, cohort: number) {
    return this.post<{ tree: TreeSummary }>(`/sessions/${sid}/focus`, { cohort }, 'PUT');
  }

  setSettings(sid: string, settings: { t_s?: number; method?: string }) {
    return this.post<{ settings: Settings }>(`/sessions/${sid}/settings`, settings, 'PUT');
  }

  setVisibility(sid: string, cohort: number, visible: boolean) {
    return this.post<{ tree: TreeSummary }>(
      `/sessions/${sid}/visibility`,
      { cohort, visible },
      'PUT',
    );
  }

  promoteSalient(sid: string, dim: string) {
    return this.post<{ settings: Settings }>(`/sessions/${sid}/salient`, { dim });
  }

  tree(sid: string) {
    return this.request<TreeSummary>(`/sessions/${sid}/tree`);
  }

  profile(sid: string) {
    return this.request<DriftProfilePayload>(`/sessions/${sid}/profile`);
  }

  /** Newest-wins: if another icicle request started after this one, the
   * response comes back flagged stale and must not be rendered. */
  async icicle(sid: string): Promise<Versioned<IcicleLayout>> {
    const version = ++this.layoutVersion;
    const payload = await this.request<IcicleLayout>(`/sessions/${sid}/layout/icicle`);
    return { payload, stale: version !== this.layoutVersion };
  }

  expandGroup(sid: string, groupId: number) {
    return this.request<Fragment[]>(`/sessions/${sid}/layout/icicle/group/${groupId}`);
  }

  dotplot(sid: string) {
    return this.request<DotPlot>(`/sessions/${sid}/layout/dotplot`);
  }

  list(sid: string) {
    return this.request<ListRowPayload[]>(`/sessions/${sid}/layout/list`);
  }

  overlap(sid: string) {
    return this.request<OverlapSummary>(`/sessions/${sid}/overlap`);
  }

  dimension(sid: string, dim: string) {
    const [system, code] = dim.split(':', 2);
    return this.request<DimensionPayload>(`/sessions/${sid}/dimension/${system}/${code}`);
  }

  exportSession(sid: string) {
    return this.request<{ log: unknown[]; settings: Settings }>(`/sessions/${sid}/export`);
  }
}

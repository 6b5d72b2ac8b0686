/** API client behavior against recorded payloads: the threshold round-trip
 * must restore the exact prior layout, superseded layout responses must come
 * back flagged stale, and HTTP errors must surface with the server detail. */

import { describe, expect, it } from 'vitest';

import { ApiClient, ApiError, type FetchLike } from '../src/api.js';
import type { IcicleLayout } from '../src/types.js';

import icicleLow from './fixtures/icicle_ts_0.05.json';
import icicleLowReturn from './fixtures/icicle_ts_0.05_return.json';
import icicleHigh from './fixtures/icicle_ts_0.2.json';

function jsonResponse(body: unknown, status = 200): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { 'content-type': 'application/json' },
  });
}

/** Serves the icicle fixture matching the last settings PUT, like the real
 * service whose layouts depend on the current saliency threshold. */
function thresholdServer(): { fetchFn: FetchLike; calls: string[] } {
  let tS = 0.05;
  const calls: string[] = [];
  const fetchFn: FetchLike = (url, init) => {
    calls.push(`${init?.method ?? 'GET'} ${url}`);
    if (url.endsWith('/settings')) {
      tS = (JSON.parse(init!.body as string) as { t_s: number }).t_s;
      return Promise.resolve(jsonResponse({ settings: { t_s: tS } }));
    }
    if (url.endsWith('/layout/icicle')) {
      if (tS === 0.05) {
        // Serve the re-recorded payload once the threshold has been away.
        const served = calls.filter((c) => c.includes('/layout/icicle')).length > 1;
        return Promise.resolve(jsonResponse(served ? icicleLowReturn : icicleLow));
      }
      return Promise.resolve(jsonResponse(icicleHigh));
    }
    return Promise.resolve(jsonResponse({ detail: `unexpected ${url}` }, 404));
  };
  return { fetchFn, calls };
}

describe('threshold slider round-trip', () => {
  it('restores the prior layout payload exactly', async () => {
    const { fetchFn } = thresholdServer();
    const api = new ApiClient('', fetchFn);

    const before = await api.icicle('s');
    await api.setSettings('s', { t_s: 0.2 });
    const during = await api.icicle('s');
    await api.setSettings('s', { t_s: 0.05 });
    const after = await api.icicle('s');

    expect(during.payload).not.toEqual(before.payload);
    expect(after.payload).toEqual(before.payload);
    // The recorded fixtures themselves prove service-side determinism.
    expect(icicleLowReturn as IcicleLayout).toEqual(icicleLow as IcicleLayout);
  });
});

describe('layout response versioning', () => {
  it('flags a slow response that was superseded as stale', async () => {
    const resolvers: ((r: Response) => void)[] = [];
    const fetchFn: FetchLike = () =>
      new Promise<Response>((resolve) => resolvers.push(resolve));
    const api = new ApiClient('', fetchFn);

    const first = api.icicle('s');
    const second = api.icicle('s');
    // The older request resolves last, after a newer one was issued.
    resolvers[1]!(jsonResponse(icicleHigh));
    resolvers[0]!(jsonResponse(icicleLow));

    expect((await first).stale).toBe(true);
    expect((await second).stale).toBe(false);
    expect((await second).payload).toEqual(icicleHigh as IcicleLayout);
  });
});

describe('error handling', () => {
  it('surfaces the server-provided detail', async () => {
    const fetchFn: FetchLike = () =>
      Promise.resolve(jsonResponse({ detail: 'unknown session nope' }, 404));
    const api = new ApiClient('', fetchFn);
    await expect(api.tree('nope')).rejects.toThrowError(ApiError);
    await expect(api.tree('nope')).rejects.toThrowError('unknown session nope');
  });

  it('falls back to the status text for non-JSON bodies', async () => {
    const fetchFn: FetchLike = () =>
      Promise.resolve(new Response('boom', { status: 500, statusText: 'Server Error' }));
    const api = new ApiClient('', fetchFn);
    await expect(api.list('s')).rejects.toThrowError('Server Error');
  });

  it('splits the dimension id into system and code path segments', async () => {
    const urls: string[] = [];
    const fetchFn: FetchLike = (url) => {
      urls.push(url);
      return Promise.resolve(jsonResponse({}));
    };
    await new ApiClient('http://x', fetchFn).dimension('s1', 'icd:B1');
    expect(urls).toEqual(['http://x/sessions/s1/dimension/icd/B1']);
  });
});

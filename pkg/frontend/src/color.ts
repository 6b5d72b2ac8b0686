/** Color ramps shared by all views: grey-to-red for absolute drift (scaled by
 * the profile's color_max) and a diverging blue-grey-red ramp for gradients.
 * Formulas mirror the server-side static renderer so exports match. */

type Rgb = [number, number, number];

const GREY: Rgb = [190, 190, 190];
const RED: Rgb = [200, 30, 30];
const BLUE: Rgb = [40, 80, 200];

function lerp(a: Rgb, b: Rgb, t: number): string {
  const u = Math.min(Math.max(t, 0), 1);
  const c = a.map((x, i) => Math.round(x + (b[i]! - x) * u));
  return `rgb(${c[0]},${c[1]},${c[2]})`;
}

/** Absolute drift: grey at 0 up to full red at color_max. */
export function driftColor(value: number, colorMax: number): string {
  return lerp(GREY, RED, colorMax <= 0 ? 0 : value / colorMax);
}

/** Signed gradient: red for increases, blue for decreases. */
export function gradientColor(delta: number): string {
  return delta >= 0 ? lerp(GREY, RED, delta) : lerp(GREY, BLUE, -delta);
}

/** Heat-map shade for dot-plot background cells. */
export function heatColor(count: number, maxCount: number): string {
  return lerp([245, 245, 245], [120, 120, 120], maxCount <= 0 ? 0 : count / maxCount);
}

export const WIDTH = 1000;

export function esc(text: string): string {
  return text
    .replace(/&/g, '&amp;')
    .replace(/</g, '&lt;')
    .replace(/>/g, '&gt;')
    .replace(/"/g, '&quot;');
}

export function svg(height: number, body: string[], cls = ''): string {
  const className = cls ? ` class="${cls}"` : '';
  return (
    `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${WIDTH} ${fmt(height)}"` +
    ` width="${WIDTH}" height="${fmt(height)}"${className}>\n` +
    body.join('\n') +
    '\n</svg>\n'
  );
}

/** Compact deterministic number formatting for geometry attributes. */
export function fmt(x: number): string {
  return Number(x.toFixed(3)).toString();
}

export const DIAMOND = '◆';

export function fallbackSvg(message: string): string {
  return svg(40, [`<text x="10" y="24" font-size="13">unable to render: ${esc(message)}</text>`]);
}

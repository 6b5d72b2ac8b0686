"""Static SVG renderings of the layouts (grey-red ramp for drift, diverging
blue-grey-red for gradients). Fixed 1000px-wide viewBox; deterministic output.
"""

from __future__ import annotations

from cohortdrift.layout import DotPlotLayout, ListRow, SplitIcicleLayout

WIDTH = 1000
GREY = (190, 190, 190)
RED = (200, 30, 30)
BLUE = (40, 80, 200)
DIAMOND = "◆"


def _lerp(a, b, t: float) -> str:
    t = min(max(t, 0.0), 1.0)
    return "rgb(%d,%d,%d)" % tuple(round(x + (y - x) * t) for x, y in zip(a, b))


def drift_color(value: float, color_max: float) -> str:
    t = 0.0 if color_max <= 0 else value / color_max
    return _lerp(GREY, RED, t)


def gradient_color(delta: float) -> str:
    if delta >= 0:
        return _lerp(GREY, RED, delta)
    return _lerp(GREY, BLUE, -delta)


def _svg(height: float, body: list[str]) -> str:
    return (
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {WIDTH} {height:g}" '
        f'width="{WIDTH}" height="{height:g}">\n' + "\n".join(body) + "\n</svg>\n"
    )


def render_icicle_svg(layout: SplitIcicleLayout, row_height: float = 14.0) -> str:
    nrows = len(layout.rows)
    max_depth = max((len(r.nodes) for r in layout.rows), default=1)
    col = WIDTH / max_depth
    body = []
    for frag in layout.fragments:
        x, y = frag.depth * col, frag.row_start * row_height
        h = frag.row_span * row_height
        fill = drift_color(frag.value, layout.color_max)
        stroke = ' stroke="black" stroke-width="1.5"' if frag.salient else ' stroke="white" stroke-width="0.5"'
        body.append(
            f'<rect x="{x:g}" y="{y:g}" width="{col:g}" height="{h:g}" fill="{fill}"{stroke}>'
            f"<title>{frag.dim} H={frag.value:.4f}</title></rect>"
        )
        if frag.constrained:
            body.append(
                f'<text x="{x + 3:g}" y="{y + min(h, row_height) - 3:g}" font-size="10">{DIAMOND}</text>'
            )
    for group in layout.groups:
        for frag in group.members:
            x, y = frag.depth * col, frag.row_start * row_height
            h = frag.row_span * row_height * group.height_ratio
            y += frag.row_span * row_height * (1 - group.height_ratio) / 2
            fill = drift_color(group.value, layout.color_max)
            body.append(
                f'<rect x="{x:g}" y="{y:g}" width="{col:g}" height="{h:g}" fill="{fill}" '
                f'stroke="white" stroke-width="0.5" opacity="0.9">'
                f"<title>group {group.id}: {frag.dim}</title></rect>"
            )
    return _svg(nrows * row_height, body)


def render_dotplot_svg(layout: DotPlotLayout, height: float = 500.0) -> str:
    max_depth = max([p["x"] for p in layout.points] + [1])
    body = []
    cw, ch = WIDTH / layout.depth_bins, height / layout.value_bins
    max_count = max([c["count"] for c in layout.heat_cells] + [1])
    for cell in layout.heat_cells:
        x = cell["depth_bin"] * cw
        y = height - (cell["value_bin"] + 1) * ch
        body.append(
            f'<rect x="{x:g}" y="{y:g}" width="{cw:g}" height="{ch:g}" '
            f'fill="{_lerp((245, 245, 245), (120, 120, 120), cell["count"] / max_count)}">'
            f'<title>{cell["count"]} dims</title></rect>'
        )
    for p in layout.points:
        x = (p["x"] / max(max_depth, 1)) * (WIDTH - 40) + 20
        y = height - p["y"] * height
        r = 3 + p["size"] * 20
        body.append(
            f'<circle cx="{x:g}" cy="{y:g}" r="{r:g}" fill="{gradient_color(p["sign"] * p["size"])}" '
            f'stroke="black" stroke-width="0.5"><title>{p["dim"]} H={p["y"]:.4f}</title></circle>'
        )
    return _svg(height, body)


def render_list_svg(rows: list[ListRow], color_max: float, row_height: float = 16.0, limit: int = 100) -> str:
    shown = rows[:limit]
    body = []
    for i, row in enumerate(shown):
        y = i * row_height
        bar = row.value * (WIDTH - 420)
        marker = f" {DIAMOND}" if row.constrained else ""
        body.append(
            f'<text x="2" y="{y + row_height - 4:g}" font-size="11">{row.label}{marker}</text>'
        )
        body.append(
            f'<rect x="400" y="{y + 2:g}" width="{bar:g}" height="{row_height - 4:g}" '
            f'fill="{drift_color(row.value, color_max)}"><title>{row.dim} H={row.value:.4f}</title></rect>'
        )
    return _svg(len(shown) * row_height, body)

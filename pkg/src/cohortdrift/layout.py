"""Renderer-agnostic geometry for the drift views.

The split icicle layout is built in three stages: split the hierarchy into
leaf-to-root paths, sort paths descending by their maximum drift, then merge
vertically adjacent cells holding the same dimension. The result guarantees
that every path above a node carries a value >= that node's value (no gaps or
inversions), at the cost of some nodes appearing as multiple fragments.

Two aggregation methods collapse non-salient cells into groups: breadth-first
merges adjacent same-depth cells that share a common salient descendant or
have none, propagating groups downward; depth-first merges runs along each
root-to-leaf path between salient nodes, then unions runs that share a start
or end fragment.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import repeat

import numpy as np

from cohortdrift.hierarchy import CodeHierarchy, DimensionId
from cohortdrift.metrics import AggregationSettings, DriftProfile

GROUP_HEIGHT_RATIO = 1 / 3  # unit rows per member path when drawn reduced


class LayoutError(ValueError):
    pass


@dataclass(frozen=True, slots=True)
class PathEntry:
    leaf: DimensionId
    nodes: tuple[DimensionId, ...]  # root first
    key: float  # max per-dim drift along the path


@dataclass(slots=True)
class Fragment:
    dim: DimensionId
    depth: int
    row_start: int
    row_span: int
    value: float
    split_group: int | None = None
    constrained: bool = False
    salient: bool = False

    def to_json(self) -> dict:
        return {
            "dim": str(self.dim),
            "depth": self.depth,
            "row_start": self.row_start,
            "row_span": self.row_span,
            "value": self.value,
            "split_group": self.split_group,
            "constrained": self.constrained,
            "salient": self.salient,
        }


@dataclass
class Group:
    id: int
    members: list[Fragment]
    value: float
    reduced_height: bool = True
    constrained: bool = False
    height_ratio: float = GROUP_HEIGHT_RATIO

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "members": [f.to_json() for f in self.members],
            "value": self.value,
            "reduced_height": self.reduced_height,
            "constrained": self.constrained,
            "height_ratio": self.height_ratio,
        }


@dataclass
class SplitIcicleLayout:
    rows: list[PathEntry]
    fragments: list[Fragment]
    groups: list[Group] = field(default_factory=list)
    color_max: float = 0.0

    def cell(self, row: int, depth: int) -> DimensionId | None:
        path = self.rows[row].nodes
        return path[depth] if depth < len(path) else None

    def to_json(self) -> dict:
        return {
            "rows": [
                {"leaf": str(r.leaf), "nodes": [str(n) for n in r.nodes], "key": r.key}
                for r in self.rows
            ],
            "fragments": [f.to_json() for f in self.fragments],
            "groups": [g.to_json() for g in self.groups],
            "color_max": self.color_max,
        }


def _assign_split_groups(
    fragments: list[Fragment],
    split_ids: dict[tuple[DimensionId, int], list[Fragment]],
) -> list[Fragment]:
    # Callers emit fragments in (depth, row_start) order already.
    next_split = 0
    for frags in split_ids.values():
        if len(frags) > 1:
            for f in frags:
                f.split_group = next_split
            next_split += 1
    return fragments


def _merge_cells(rows: list[PathEntry], profile: DriftProfile) -> list[Fragment]:
    """Merge vertically adjacent same-dim cells per depth column into fragments.

    Fragments of a dim that remain split at a depth share a split_group id.
    """
    constrained = profile.constrained
    fragments: list[Fragment] = []
    max_depth = max((len(r.nodes) for r in rows), default=0)
    split_ids: dict[tuple[DimensionId, int], list[Fragment]] = {}
    for depth in range(max_depth):
        run_dim, run_start = None, 0
        for row in range(len(rows) + 1):
            path = rows[row].nodes if row < len(rows) else ()
            dim = path[depth] if depth < len(path) else None
            if dim == run_dim and dim is not None:
                continue
            if run_dim is not None:
                frag = Fragment(
                    run_dim,
                    depth,
                    run_start,
                    row - run_start,
                    profile.per_dim[run_dim],
                    None,
                    run_dim in constrained,
                )
                fragments.append(frag)
                split_ids.setdefault((run_dim, depth), []).append(frag)
            run_dim, run_start = dim, row
    return _assign_split_groups(fragments, split_ids)


def _cell_grid(layout: SplitIcicleLayout) -> tuple[np.ndarray, list[DimensionId]]:
    """Dense (row, depth) grid of dimension indices, cached per layout.

    Absent cells hold -1. The grid turns run detection during aggregation into
    vector arithmetic instead of per-cell comparisons.
    """
    cached = getattr(layout, "_grid", None)
    if cached is not None:
        return cached
    rows = layout.rows
    max_depth = max((len(r.nodes) for r in rows), default=0)
    index: dict[DimensionId, int] = {}
    dim_list: list[DimensionId] = []
    grid = np.full((len(rows), max_depth), -1, dtype=np.int32)
    for r, entry in enumerate(rows):
        for d, dim in enumerate(entry.nodes):
            i = index.get(dim)
            if i is None:
                i = index[dim] = len(dim_list)
                dim_list.append(dim)
            grid[r, d] = i
    layout._grid = (grid, dim_list)
    return layout._grid


def _dim_arrays(
    layout: SplitIcicleLayout, profile: DriftProfile, salient: set[DimensionId]
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Per-dim-index value/constrained/salient arrays aligned with the grid."""
    _, dim_list = _cell_grid(layout)
    cached = getattr(layout, "_dim_cache", None)
    if cached is None or cached[0] is not profile:
        n = len(dim_list)
        values = np.fromiter((profile.per_dim[d] for d in dim_list), np.float64, count=n)
        cons = profile.constrained
        constrained = np.fromiter((d in cons for d in dim_list), bool, count=n)
        cached = (profile, values, constrained)
        layout._dim_cache = cached
    sal = np.fromiter((d in salient for d in dim_list), bool, count=len(dim_list))
    return cached[1], cached[2], sal


def _merge_cell_runs(
    layout: SplitIcicleLayout,
    profile: DriftProfile,
    by_depth: dict[int, list[int]],
    salient: set[DimensionId] | None = None,
) -> list[Fragment]:
    """Vertical merge restricted to explicit per-depth row sets."""
    grid, dim_list = _cell_grid(layout)
    values, constrained, salient_arr = _dim_arrays(layout, profile, salient or set())
    fragments: list[Fragment] = []
    split_ids: dict[tuple[int, int], list[Fragment]] = {}
    for depth in sorted(by_depth):
        r = np.sort(np.asarray(by_depth[depth], dtype=np.int64))
        d = grid[r, depth]
        breaks = np.flatnonzero((np.diff(r) != 1) | (d[1:] != d[:-1]))
        starts = np.concatenate(([0], breaks + 1))
        ends = np.concatenate((breaks, [len(r) - 1]))
        d_s = d[starts]
        d_start = d_s.tolist()
        frags = list(
            map(
                Fragment,
                [dim_list[i] for i in d_start],
                repeat(depth),
                r[starts].tolist(),
                (r[ends] - r[starts] + 1).tolist(),
                values[d_s].tolist(),
                repeat(None),
                constrained[d_s].tolist(),
                salient_arr[d_s].tolist(),
            )
        )
        fragments.extend(frags)
        for di, frag in zip(d_start, frags):
            split_ids.setdefault((di, depth), []).append(frag)
    return _assign_split_groups(fragments, split_ids)


def split_icicle(h: CodeHierarchy, profile: DriftProfile) -> SplitIcicleLayout:
    """Split/sort/merge layout over the whole forest.

    Ties in path key break toward the larger leaf drift, then the
    lexicographic root-to-leaf id sequence, so layouts are deterministic.
    """
    leaves = h.leaves()
    if not leaves:
        raise LayoutError("empty hierarchy")
    paths = []
    for leaf in leaves:
        nodes = tuple(h.root_path(leaf))
        key = max(profile.per_dim[d] for d in nodes)
        paths.append(PathEntry(leaf, nodes, key))
    paths.sort(
        key=lambda p: (
            -p.key,
            -profile.per_dim[p.leaf],
            tuple(str(n) for n in p.nodes),
        )
    )
    fragments = _merge_cells(paths, profile)
    return SplitIcicleLayout(paths, fragments, [], profile.color_max)


def _salient_suffixes(
    rows: list[PathEntry], salient: set[DimensionId]
) -> list[list[frozenset[DimensionId]]]:
    """For each cell, the set of salient dims strictly below it on its path.

    Suffix sets are shared between adjacent depths when nothing changes, so
    identity comparison is a cheap equality test for the merge rules.
    """
    empty: frozenset[DimensionId] = frozenset()
    out = []
    for entry in rows:
        n = len(entry.nodes)
        suffix: list[frozenset[DimensionId]] = [empty] * n
        acc = empty
        for depth in range(n - 2, -1, -1):
            below = entry.nodes[depth + 1]
            if below in salient:
                acc = acc | {below}
            suffix[depth] = acc
        out.append(suffix)
    return out


def _pair_mergeable(a: frozenset, b: frozenset) -> bool:
    # Rule: share a common salient descendant, or neither has any.
    if a is b:
        return True
    if not a and not b:
        return True
    return bool(a & b)


def aggregate_breadth_first(
    layout: SplitIcicleLayout, salient: set[DimensionId], profile: DriftProfile
) -> SplitIcicleLayout:
    """Collapse non-salient cells into same-level groups, propagated downward.

    Adjacent same-depth non-salient cells merge when they share a common
    salient descendant or have none; each merged run continues its parents'
    group where the parents all sit in one group, and starts a new group
    below salient cells or roots.
    """
    rows = layout.rows
    suffixes = _salient_suffixes(rows, salient)
    max_depth = max((len(r.nodes) for r in rows), default=0)

    # Flat row-major (row, depth) -> group id; -2 marks salient/absent cells.
    gid_flat = [-2] * (len(rows) * max_depth)
    next_group = 0
    for depth in range(max_depth):
        prev_row: int | None = None
        for row in range(len(rows)):
            path = rows[row].nodes
            if depth >= len(path) or path[depth] in salient:
                prev_row = None
                continue
            at = row * max_depth + depth
            parent_gid = gid_flat[at - 1] if depth > 0 else -2
            if parent_gid != -2:
                # Propagation wins: continue the parents' group downward.
                gid = parent_gid
            elif (
                prev_row is not None
                and (depth == 0 or gid_flat[prev_row * max_depth + depth - 1] == -2)
                and _pair_mergeable(suffixes[prev_row][depth], suffixes[row][depth])
            ):
                # New-group level: merge with the adjacent cell per the rule.
                gid = gid_flat[prev_row * max_depth + depth]
            else:
                gid = next_group
                next_group += 1
            gid_flat[at] = gid
            prev_row = row

    return _build_grouped_layout(layout, profile, salient, gid_flat)


def aggregate_depth_first(
    layout: SplitIcicleLayout, salient: set[DimensionId], profile: DriftProfile
) -> SplitIcicleLayout:
    """Collapse runs of non-salient cells along each path into groups.

    Each path is cut at salient cells; the resulting per-row segments are
    unioned when they share the same starting or ending fragment (the same
    node instance after the plain vertical merge).
    """
    rows = layout.rows

    # Canonical node-instance ids from the plain vertical merge of all cells.
    frag_of: dict[tuple[int, int], int] = {}
    for i, frag in enumerate(layout.fragments):
        for r in range(frag.row_start, frag.row_start + frag.row_span):
            frag_of[(r, frag.depth)] = i

    segments: list[tuple[int, int, int]] = []  # (row, start depth, end depth)
    seg_bounds: list[tuple[int, int]] = []  # (start fragment, end fragment)
    for row, entry in enumerate(rows):
        start = None
        for depth in range(len(entry.nodes) + 1):
            at_end = depth == len(entry.nodes)
            is_salient = not at_end and entry.nodes[depth] in salient
            if at_end or is_salient:
                if start is not None:
                    segments.append((row, start, depth))
                    seg_bounds.append((frag_of[(row, start)], frag_of[(row, depth - 1)]))
                    start = None
            elif start is None:
                start = depth

    # Union-find over segments sharing a start or end fragment.
    parent = list(range(len(segments)))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    by_start: dict[int, int] = {}
    by_end: dict[int, int] = {}
    for i, (s, e) in enumerate(seg_bounds):
        for table, key in ((by_start, s), (by_end, e)):
            if key in table:
                ra, rb = find(table[key]), find(i)
                if ra != rb:
                    parent[rb] = ra
            else:
                table[key] = i

    max_depth = max((len(r.nodes) for r in rows), default=0)
    gid_flat = [-2] * (len(rows) * max_depth)
    root_to_group: dict[int, int] = {}
    for i, (row, start, end) in enumerate(segments):
        root = find(i)
        gid = root_to_group.setdefault(root, len(root_to_group))
        base = row * max_depth
        for d in range(start, end):
            gid_flat[base + d] = gid
    return _build_grouped_layout(layout, profile, salient, gid_flat)


def _build_grouped_layout(
    layout: SplitIcicleLayout,
    profile: DriftProfile,
    salient: set[DimensionId],
    gid_flat: list[int],
) -> SplitIcicleLayout:
    rows = layout.rows
    grid, _ = _cell_grid(layout)
    nrows, ndepth = grid.shape
    gid_grid = np.asarray(gid_flat, dtype=np.int64).reshape(nrows, ndepth)

    salient_by_depth: dict[int, np.ndarray] = {}
    members: dict[int, dict[int, np.ndarray]] = {}
    for d in range(ndepth):
        col = gid_grid[:, d]
        lone = np.flatnonzero((col == -2) & (grid[:, d] >= 0))
        if lone.size:
            salient_by_depth[d] = lone
        grouped = np.flatnonzero(col != -2)
        if grouped.size:
            order = np.argsort(col[grouped], kind="stable")
            rows_sorted = grouped[order]
            gids = col[grouped][order]
            cuts = np.flatnonzero(np.diff(gids)) + 1
            for chunk in np.split(rows_sorted, cuts):
                members.setdefault(int(col[chunk[0]]), {})[d] = chunk

    fragments = _merge_cell_runs(layout, profile, salient_by_depth, salient=salient)
    groups = []
    for gid in sorted(members):
        frags = _merge_cell_runs(layout, profile, members[gid])
        value = max(f.value for f in frags)
        constrained = any(f.constrained for f in frags)
        groups.append(Group(gid, frags, value, True, constrained))
    return SplitIcicleLayout(rows, fragments, groups, layout.color_max)


def expand_group(layout: SplitIcicleLayout, group_id: int) -> list[Fragment]:
    """Classic (unsplit) icicle geometry of one group's member dimensions."""
    group = next((g for g in layout.groups if g.id == group_id), None)
    if group is None:
        raise LayoutError(f"unknown group {group_id}")
    dims = {f.dim for f in group.members}
    values = {f.dim: f.value for f in group.members}

    parent_in: dict[DimensionId, DimensionId | None] = {}
    children: dict[DimensionId, list[DimensionId]] = {d: [] for d in dims}
    # Parent links restricted to the member set, read off the layout rows.
    link: dict[DimensionId, DimensionId] = {}
    for entry in layout.rows:
        for i in range(1, len(entry.nodes)):
            if entry.nodes[i] in dims and entry.nodes[i - 1] in dims:
                link[entry.nodes[i]] = entry.nodes[i - 1]
    for d in sorted(dims):
        p = link.get(d)
        parent_in[d] = p
        if p is not None:
            children[p].append(d)

    def leaf_count(d: DimensionId) -> int:
        return sum(leaf_count(c) for c in children[d]) if children[d] else 1

    out: list[Fragment] = []

    def place(d: DimensionId, depth: int, row: int) -> int:
        span = leaf_count(d)
        out.append(Fragment(d, depth, row, span, values[d]))
        r = row
        for c in children[d]:
            r += place(c, depth + 1, r)
        return span

    row = 0
    for d in sorted(dims):
        if parent_in[d] is None:
            row += place(d, 0, row)
    return out


@dataclass
class DotPlotLayout:
    points: list[dict]
    heat_cells: list[dict]
    depth_bins: int
    value_bins: int

    def to_json(self) -> dict:
        return {
            "points": self.points,
            "heat_cells": self.heat_cells,
            "depth_bins": self.depth_bins,
            "value_bins": self.value_bins,
        }


def dot_plot(
    h: CodeHierarchy,
    profile: DriftProfile,
    settings: AggregationSettings,
    depth_bins: int = 10,
    value_bins: int = 20,
) -> DotPlotLayout:
    """Salient dims as points (x = depth, y = drift, size = |gradient to parent|);
    everything else binned into a background heat map over (depth, drift)."""
    salient = profile.salient | settings.manual_salient
    max_depth = max(h.node(d).depth for d in h.dims)
    points = []
    for dim in sorted(salient):
        node = h.node(dim)
        value = profile.per_dim[dim]
        grad = 0.0 if node.parent is None else value - profile.per_dim[node.parent]
        points.append(
            {
                "dim": str(dim),
                "x": node.depth,
                "y": value,
                "size": abs(grad),
                "sign": (grad > 0) - (grad < 0),
                "constrained": dim in profile.constrained,
                "ancestors": [str(a) for a in h.ancestors(dim)],
                "salient_descendants": sorted(
                    str(d) for d in h.descendants(dim) if d in salient
                ),
            }
        )

    cells: dict[tuple[int, int], list[DimensionId]] = {}
    for dim in h.dims:
        if dim in salient:
            continue
        depth = h.node(dim).depth
        value = profile.per_dim[dim]
        di = min(int(depth / (max_depth + 1) * depth_bins), depth_bins - 1)
        vi = min(int(value * value_bins), value_bins - 1)
        cells.setdefault((di, vi), []).append(dim)
    heat = [
        {
            "depth_bin": di,
            "value_bin": vi,
            "count": len(dims),
            "dims": sorted(str(d) for d in dims),
        }
        for (di, vi), dims in sorted(cells.items())
    ]
    return DotPlotLayout(points, heat, depth_bins, value_bins)


@dataclass(frozen=True)
class ListRow:
    dim: DimensionId
    label: str
    value: float
    constrained: bool

    def to_json(self) -> dict:
        return {
            "dim": str(self.dim),
            "label": self.label,
            "value": self.value,
            "constrained": self.constrained,
        }


def list_rows(profile: DriftProfile, h: CodeHierarchy) -> list[ListRow]:
    """All dimensions in descending drift order, ties broken by id."""
    order = sorted(profile.per_dim.items(), key=lambda kv: (-kv[1], kv[0]))
    return [
        ListRow(dim, h.node(dim).label, value, dim in profile.constrained)
        for dim, value in order
    ]

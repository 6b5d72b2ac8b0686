"""Coded dimension hierarchies: forest of (system, code) nodes with ancestor closure.

Hierarchies are immutable after construction; every operation here is a read.
Attribute dimensions (demographics such as Race/Gender/Age) are grafted in as
depth-1 children of a synthetic per-dataset "attributes" root so the drift
machinery treats them uniformly with event codes.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple

ATTRIBUTE_SYSTEM = "attributes"
ATTRIBUTE_ROOT_CODE = "__attributes__"


class HierarchyError(ValueError):
    """Raised for structural problems: cycles, orphans, duplicates."""


class UnknownDimensionError(KeyError):
    """Raised when a (system, code) pair is not part of the hierarchy."""


class DimensionId(NamedTuple):
    system: str
    code: str

    def __str__(self) -> str:
        return f"{self.system}:{self.code}"

    @classmethod
    def parse(cls, text: str) -> "DimensionId":
        system, sep, code = text.partition(":")
        if not sep or not code:
            raise ValueError(f"expected 'system:code', got {text!r}")
        return cls(system, code)


@dataclass(frozen=True)
class CodeNode:
    id: DimensionId
    label: str
    parent: DimensionId | None
    depth: int


@dataclass(frozen=True)
class AttributeSpec:
    name: str
    kind: str  # "categorical" | "numeric"
    categories: tuple[str, ...] = ()
    numeric_range: tuple[float, float] | None = None

    def __post_init__(self):
        if self.kind not in ("categorical", "numeric"):
            raise ValueError(f"unknown attribute kind {self.kind!r}")
        if self.kind == "categorical" and not self.categories:
            raise ValueError(f"categorical attribute {self.name!r} needs categories")


ATTRIBUTE_ROOT = DimensionId(ATTRIBUTE_SYSTEM, ATTRIBUTE_ROOT_CODE)


@dataclass
class CodeHierarchy:
    """A forest of code trees plus optional flat attribute dimensions.

    ``nodes`` maps every DimensionId (including attribute dims and the
    synthetic attribute root) to its CodeNode. ``index``/``dims`` give a
    stable integer indexing used by the numeric kernels.
    """

    nodes: dict[DimensionId, CodeNode]
    roots: list[DimensionId]
    attribute_dims: list[AttributeSpec] = field(default_factory=list)

    def __post_init__(self):
        self.dims: list[DimensionId] = sorted(self.nodes)
        self.index: dict[DimensionId, int] = {d: i for i, d in enumerate(self.dims)}
        self._children: dict[DimensionId, list[DimensionId]] = {d: [] for d in self.nodes}
        for node in self.nodes.values():
            if node.parent is not None:
                self._children[node.parent].append(node.id)
        for kids in self._children.values():
            kids.sort()
        self._attr_by_name = {a.name: a for a in self.attribute_dims}

    def __contains__(self, dim: DimensionId) -> bool:
        return dim in self.nodes

    def __len__(self) -> int:
        return len(self.nodes)

    def node(self, dim: DimensionId) -> CodeNode:
        try:
            return self.nodes[dim]
        except KeyError:
            raise UnknownDimensionError(str(dim)) from None

    def children(self, dim: DimensionId) -> list[DimensionId]:
        self.node(dim)
        return self._children[dim]

    def is_leaf(self, dim: DimensionId) -> bool:
        return not self.children(dim)

    def attribute(self, name: str) -> AttributeSpec:
        try:
            return self._attr_by_name[name]
        except KeyError:
            raise UnknownDimensionError(name) from None

    def attribute_dim(self, name: str) -> DimensionId:
        self.attribute(name)
        return DimensionId(ATTRIBUTE_SYSTEM, name)

    def is_attribute(self, dim: DimensionId) -> bool:
        return dim.system == ATTRIBUTE_SYSTEM and dim.code != ATTRIBUTE_ROOT_CODE

    def ancestors(self, dim: DimensionId) -> list[DimensionId]:
        """Parent chain from immediate parent up to the root, excluding dim."""
        node = self.node(dim)
        chain = []
        while node.parent is not None:
            chain.append(node.parent)
            node = self.nodes[node.parent]
        return chain

    def closure(self, dims: Iterable[DimensionId]) -> set[DimensionId]:
        """dims plus all of their ancestors."""
        out: set[DimensionId] = set()
        for d in dims:
            node = self.node(d)
            out.add(d)
            while node.parent is not None and node.parent not in out:
                out.add(node.parent)
                node = self.nodes[node.parent]
        return out

    def descendants(self, dim: DimensionId) -> set[DimensionId]:
        """All strict descendants of dim."""
        out: set[DimensionId] = set()
        stack = list(self.children(dim))
        while stack:
            d = stack.pop()
            out.add(d)
            stack.extend(self._children[d])
        return out

    def leaves(self) -> list[DimensionId]:
        return [d for d in self.dims if not self._children[d]]

    def root_path(self, dim: DimensionId) -> list[DimensionId]:
        """Root-to-dim path, inclusive."""
        path = self.ancestors(dim)
        path.reverse()
        path.append(dim)
        return path

    def with_attributes(self, specs: list[AttributeSpec]) -> "CodeHierarchy":
        """Return a new hierarchy with attribute dims grafted under a synthetic root."""
        if any(r.system == ATTRIBUTE_SYSTEM for r in self.roots):
            raise HierarchyError("attributes already attached")
        nodes = dict(self.nodes)
        for spec in specs:
            dim = DimensionId(ATTRIBUTE_SYSTEM, spec.name)
            if dim in nodes:
                raise HierarchyError(f"duplicate attribute dimension {dim}")
            nodes[dim] = CodeNode(dim, spec.name, ATTRIBUTE_ROOT, 1)
        nodes[ATTRIBUTE_ROOT] = CodeNode(ATTRIBUTE_ROOT, "Attributes", None, 0)
        return CodeHierarchy(nodes, self.roots + [ATTRIBUTE_ROOT], list(specs))

    def serialize(self) -> str:
        """CSV form (code nodes only; attributes are dataset-bound, not stored)."""
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["system", "code", "parent", "label"])
        for dim in self.dims:
            if dim.system == ATTRIBUTE_SYSTEM:
                continue
            node = self.nodes[dim]
            parent = node.parent.code if node.parent else ""
            writer.writerow([dim.system, dim.code, parent, node.label])
        return buf.getvalue()


def load_hierarchy(source: str) -> CodeHierarchy:
    """Parse the ``system,code,parent,label`` CSV format into a validated forest.

    An empty ``parent`` column marks a per-system root. Raises HierarchyError
    on duplicates, orphans (parent never defined), and cycles.
    """
    reader = csv.reader(io.StringIO(source))
    header = next(reader, None)
    if header is None or [h.strip().lower() for h in header] != ["system", "code", "parent", "label"]:
        raise HierarchyError(f"bad header: expected system,code,parent,label, got {header}")

    raw: dict[DimensionId, tuple[DimensionId | None, str]] = {}
    for lineno, row in enumerate(reader, start=2):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != 4:
            raise HierarchyError(f"line {lineno}: expected 4 columns, got {len(row)}")
        system, code, parent, label = (c.strip() for c in row)
        if not code:
            raise HierarchyError(f"line {lineno}: empty code")
        dim = DimensionId(system, code)
        if dim in raw:
            raise HierarchyError(f"line {lineno}: duplicate node {dim}")
        raw[dim] = (DimensionId(system, parent) if parent else None, label)

    for dim, (parent, _) in raw.items():
        if parent is not None and parent not in raw:
            raise HierarchyError(f"orphan code {dim}: parent {parent} not defined")

    # Depth assignment doubles as cycle detection.
    depths: dict[DimensionId, int] = {}

    def depth_of(dim: DimensionId, trail: set[DimensionId]) -> int:
        if dim in depths:
            return depths[dim]
        if dim in trail:
            raise HierarchyError(f"cycle detected through {dim}")
        trail.add(dim)
        parent = raw[dim][0]
        d = 0 if parent is None else depth_of(parent, trail) + 1
        depths[dim] = d
        return d

    for dim in raw:
        depth_of(dim, set())

    nodes = {
        dim: CodeNode(dim, label or dim.code, parent, depths[dim])
        for dim, (parent, label) in raw.items()
    }
    roots = sorted(d for d, n in nodes.items() if n.parent is None)
    return CodeHierarchy(nodes, roots)

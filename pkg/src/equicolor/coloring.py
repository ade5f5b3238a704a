"""Color-class partitions, properness/equitability checks, and class moves.

A Partition is an ordered list of disjoint vertex classes over 0..n-1;
at most one vertex may be left uncolored (the constructive solver works
on partitions of V(G) minus one vertex).  Violations are returned as
values, never raised: the harness aggregates millions of checks.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .graph import Graph

__all__ = [
    "Partition",
    "EquitableColoring",
    "Violation",
    "is_proper",
    "is_equitable",
    "verify_equitable_k_coloring",
    "apply_chain",
    "format_coloring",
    "parse_coloring",
    "coloring_to_json",
    "coloring_from_json",
]


@dataclass(frozen=True)
class Partition:
    """Ordered disjoint vertex classes; class order is significant."""

    classes: tuple[frozenset[int], ...]
    n_vertices: int
    uncolored: Optional[int] = None

    @staticmethod
    def make(
        classes: Iterable[Iterable[int]],
        n_vertices: int,
        uncolored: Optional[int] = None,
    ) -> "Partition":
        frozen = tuple(frozenset(c) for c in classes)
        seen: set[int] = set()
        for cls in frozen:
            for v in cls:
                if not 0 <= v < n_vertices:
                    raise ValueError(f"vertex {v} out of range 0..{n_vertices - 1}")
                if v in seen:
                    raise ValueError(f"vertex {v} appears in two classes")
                seen.add(v)
        if uncolored is not None:
            if not 0 <= uncolored < n_vertices:
                raise ValueError("uncolored vertex out of range")
            if uncolored in seen:
                raise ValueError("uncolored vertex is also in a class")
            seen.add(uncolored)
        if len(seen) != n_vertices:
            missing = sorted(set(range(n_vertices)) - seen)
            raise ValueError(f"vertices not covered: {missing}")
        return Partition(frozen, n_vertices, uncolored)

    @property
    def k(self) -> int:
        return len(self.classes)

    def sizes(self) -> tuple[int, ...]:
        return tuple(len(c) for c in self.classes)

    def class_of(self, v: int) -> Optional[int]:
        for i, cls in enumerate(self.classes):
            if v in cls:
                return i
        return None

    def color_list(self) -> list[Optional[int]]:
        colors: list[Optional[int]] = [None] * self.n_vertices
        for i, cls in enumerate(self.classes):
            for v in cls:
                colors[v] = i
        return colors


@dataclass(frozen=True)
class EquitableColoring:
    """A verified equitable k-coloring (no uncolored vertex)."""

    partition: Partition
    k: int


@dataclass(frozen=True)
class Violation:
    """Machine-readable verification failure with a witness."""

    kind: str  # class-count | coverage | edge-in-class | size-imbalance
    witness: tuple
    message: str


def is_proper(g: Graph, p: Partition) -> bool:
    """True iff no edge has both ends in one class (p must cover all vertices)."""
    if p.uncolored is not None or sum(p.sizes()) != g.n or p.n_vertices != g.n:
        raise ValueError("partition does not cover all vertices of the graph")
    return _find_monochromatic_edge(g, p) is None


def _find_monochromatic_edge(g: Graph, p: Partition) -> Optional[tuple[int, int]]:
    for cls in p.classes:
        for v in cls:
            bad = g.neighbors(v) & cls
            for w in bad:
                if w > v:
                    return (v, w)
    return None


def is_equitable(p: Partition) -> bool:
    """True iff class sizes pairwise differ by at most 1."""
    sizes = p.sizes()
    if not sizes:
        return True
    return max(sizes) - min(sizes) <= 1


def verify_equitable_k_coloring(g: Graph, p: Partition, k: int) -> Optional[Violation]:
    """None when p is a proper equitable k-coloring of g, else a Violation."""
    if p.k != k:
        return Violation("class-count", (p.k, k), f"partition has {p.k} classes, expected {k}")
    if p.uncolored is not None or p.n_vertices != g.n or sum(p.sizes()) != g.n:
        covered = sum(p.sizes())
        return Violation("coverage", (covered, g.n), f"covers {covered} of {g.n} vertices")
    edge = _find_monochromatic_edge(g, p)
    if edge is not None:
        return Violation("edge-in-class", edge, f"edge {edge} lies inside one class")
    sizes = p.sizes()
    if max(sizes) - min(sizes) > 1:
        big = sizes.index(max(sizes))
        small = sizes.index(min(sizes))
        return Violation(
            "size-imbalance",
            (sizes[big], sizes[small]),
            f"class sizes {sizes[big]} and {sizes[small]} differ by more than 1",
        )
    return None


def apply_chain(
    p: Partition, chain: Sequence[tuple[int, Optional[int], int]]
) -> Partition:
    """Apply class moves (vertex, from_class, to_class) in order.

    from_class None moves the designated uncolored vertex into a class.
    Each vertex must actually be where its move says it is.
    """
    classes = [set(c) for c in p.classes]
    uncolored = p.uncolored
    for vertex, src, dst in chain:
        if not 0 <= dst < len(classes):
            raise ValueError(f"move of {vertex}: class {dst} out of range")
        if src is None:
            if uncolored != vertex:
                raise ValueError(f"move of {vertex}: it is not the uncolored vertex")
            uncolored = None
        else:
            if not 0 <= src < len(classes) or vertex not in classes[src]:
                raise ValueError(f"move of {vertex}: not in class {src}")
            classes[src].discard(vertex)
        classes[dst].add(vertex)
    return Partition.make(classes, p.n_vertices, uncolored)


# -- coloring text/JSON formats ---------------------------------------------
#
# Text: one line per class, `<class-index>: <vertices>`, both 1-indexed.
# JSON: {"classes": [[...], ...]} with the same 1-indexed vertex ids.


def format_coloring(p: Partition) -> str:
    lines = []
    for i, cls in enumerate(p.classes, 1):
        verts = " ".join(str(v + 1) for v in sorted(cls))
        lines.append(f"{i}: {verts}".rstrip())
    return "\n".join(lines) + "\n"


def parse_coloring(text: str, n_vertices: int) -> Partition:
    entries: dict[int, list[int]] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        head, _, rest = line.partition(":")
        try:
            idx = int(head)
        except ValueError as exc:
            raise ValueError(f"line {lineno}: bad class index {head!r}") from exc
        if idx in entries:
            raise ValueError(f"line {lineno}: duplicate class {idx}")
        entries[idx] = [int(tok) - 1 for tok in rest.split()]
    if not entries:
        raise ValueError("no classes found")
    if sorted(entries) != list(range(1, len(entries) + 1)):
        raise ValueError("class indices must be 1..k")
    classes = [entries[i] for i in range(1, len(entries) + 1)]
    return Partition.make(classes, n_vertices)


def coloring_to_json(p: Partition) -> str:
    return json.dumps(
        {"classes": [sorted(v + 1 for v in cls) for cls in p.classes]}
    )


def coloring_from_json(text: str, n_vertices: int) -> Partition:
    data = json.loads(text)
    classes = [[v - 1 for v in cls] for cls in data["classes"]]
    return Partition.make(classes, n_vertices)

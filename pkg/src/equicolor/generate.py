"""Isomorph-free enumeration of small family graphs and seeded random members.

Enumeration proceeds by vertex extension: every n-vertex family member
arises from an (n-1)-vertex member plus one new vertex, because all the
supported constraints (planarity, forbidden cycles, degree caps) are
closed under vertex deletion.  Duplicates are removed with a canonical
form: the lexicographically minimal adjacency code over vertex orderings
compatible with an iterated neighbor-color refinement, searched with
prefix pruning and twin elimination.  Exact, no external dependencies,
adequate for the n <= 11 desk scale.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable, Iterator, Optional

import networkx as nx

from .graph import FamilySpec, Graph

__all__ = [
    "GenConfig",
    "EXHAUSTIVE_N_CAP",
    "canonical_form",
    "are_isomorphic",
    "enumerate_family",
    "enumerate_graphs_with_max_edges",
    "random_family_graph",
    "generate_stream",
    "is_exception",
    "clear_enumeration_cache",
]

EXHAUSTIVE_N_CAP = 11


@dataclass(frozen=True)
class GenConfig:
    """Generation request: exhaustive (n <= 11) or seeded random members."""

    n: int
    family: FamilySpec
    mode: str = "exhaustive"  # "exhaustive" | "random"
    count: int = 1
    seed: int = 0
    connected: bool = False

    def __post_init__(self):
        if self.mode not in ("exhaustive", "random"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.n < 1:
            raise ValueError("n must be positive")


# -- canonical form ----------------------------------------------------------


def _neighbor_lists(n: int, bits: tuple[int, ...]) -> list[list[int]]:
    out = []
    for v in range(n):
        m = bits[v]
        row = []
        while m:
            low = m & -m
            m ^= low
            row.append(low.bit_length() - 1)
        out.append(row)
    return out


def _refine_colors(n: int, bits: tuple[int, ...]) -> list[int]:
    """Iterated color refinement; returns canonical color ranks per vertex."""
    nbrs = _neighbor_lists(n, bits)
    color = [len(nbrs[v]) for v in range(n)]
    ncls = -1
    while True:
        sigs = [
            (color[v], tuple(sorted(color[u] for u in nbrs[v]))) for v in range(n)
        ]
        rank = {s: i for i, s in enumerate(sorted(set(sigs)))}
        color = [rank[s] for s in sigs]
        if len(rank) == ncls:
            return color
        ncls = len(rank)


def _twin_classes(n: int, bits: tuple[int, ...]) -> list[int]:
    """Class ids under the twin relation (swapping two twins is an automorphism)."""
    cls = list(range(n))

    def find(a: int) -> int:
        while cls[a] != a:
            cls[a] = cls[cls[a]]
            a = cls[a]
        return a

    for u in range(n):
        bu = bits[u]
        for v in range(u + 1, n):
            if bu & ~(1 << v) == bits[v] & ~(1 << u):
                ru, rv = find(u), find(v)
                if ru != rv:
                    cls[max(ru, rv)] = min(ru, rv)
    return [find(v) for v in range(n)]


def canonical_code(n: int, bits: tuple[int, ...]) -> tuple[int, ...]:
    """Minimal adjacency code; equal codes iff the graphs are isomorphic.

    Row i holds the adjacency bits between the vertex at position i and
    positions 0..i-1.  Orderings are restricted to nondecreasing refined
    color, which is isomorphism-invariant, so the restricted minimum is a
    complete invariant.
    """
    if n == 0:
        return ()
    colors = _refine_colors(n, bits)
    by_color = sorted(range(n), key=lambda v: (colors[v], v))
    if len(set(colors)) == n:
        code = []
        pos = {v: i for i, v in enumerate(by_color)}
        for i, v in enumerate(by_color):
            row = 0
            bv = bits[v]
            for j in range(i):
                if (bv >> by_color[j]) & 1:
                    row |= 1 << j
            code.append(row)
        return tuple(code)

    seq = [colors[v] for v in by_color]
    twin = _twin_classes(n, bits)
    inf = 1 << (n + 1)
    best = [inf] * n
    placed: list[int] = []
    placed_mask = 0

    def rec(pos: int) -> None:
        nonlocal placed_mask
        if pos == n:
            return
        req = seq[pos]
        cands = []
        for v in range(n):
            if placed_mask & (1 << v) or colors[v] != req:
                continue
            row = 0
            bv = bits[v]
            for j, u in enumerate(placed):
                if (bv >> u) & 1:
                    row |= 1 << j
            cands.append((row, v))
        cands.sort()
        tried: set[int] = set()
        for row, v in cands:
            if row > best[pos]:
                break
            if twin[v] in tried:
                continue
            tried.add(twin[v])
            if row < best[pos]:
                best[pos] = row
                for j in range(pos + 1, n):
                    best[j] = inf
            placed.append(v)
            placed_mask |= 1 << v
            rec(pos + 1)
            placed.pop()
            placed_mask &= ~(1 << v)

    rec(0)
    return tuple(best)


def canonical_form(g: Graph) -> tuple[int, ...]:
    return canonical_code(g.n, g.adjacency_bits())


def are_isomorphic(g: Graph, h: Graph) -> bool:
    return g.n == h.n and canonical_form(g) == canonical_form(h)


def _graph_from_bits(n: int, bits: tuple[int, ...]) -> Graph:
    edges = []
    for v in range(n):
        m = bits[v] >> (v + 1)
        w = v + 1
        while m:
            if m & 1:
                edges.append((v, w))
            m >>= 1
            w += 1
    return Graph(n, edges)


def _bits_from_code(n: int, code: tuple[int, ...]) -> tuple[int, ...]:
    bits = [0] * n
    for i, row in enumerate(code):
        for j in range(i):
            if (row >> j) & 1:
                bits[i] |= 1 << j
                bits[j] |= 1 << i
    return tuple(bits)


# -- exhaustive enumeration --------------------------------------------------


def _planar_bits(n: int, bits: tuple[int, ...]) -> bool:
    g = nx.Graph()
    g.add_nodes_from(range(n))
    for v in range(n):
        m = bits[v] >> (v + 1)
        w = v + 1
        while m:
            if m & 1:
                g.add_edge(v, w)
            m >>= 1
            w += 1
    return bool(nx.check_planarity(g, counterexample=False)[0])


def _pair_path_masks(n: int, bits: tuple[int, ...], edge_count: int) -> list[int]:
    """mask[a] = vertices b joined to a by a simple path of exactly edge_count edges."""
    if edge_count == 1:
        return list(bits)
    masks = [0] * n
    if edge_count == 2:
        for a in range(n):
            m = bits[a]
            acc = 0
            while m:
                low = m & -m
                m ^= low
                acc |= bits[low.bit_length() - 1]
            masks[a] = acc & ~(1 << a)
        return masks
    if edge_count == 3:
        for a in range(n):
            acc = 0
            ma = bits[a]
            while ma:
                la = ma & -ma
                ma ^= la
                x = la.bit_length() - 1
                mx = bits[x] & ~(1 << a)
                while mx:
                    lx = mx & -mx
                    mx ^= lx
                    y = lx.bit_length() - 1
                    acc |= bits[y] & ~(1 << a) & ~(1 << x)
            masks[a] = acc
        return masks
    raise ValueError("pair-path masks support 1..3 edges")


def _extensions(
    n_new: int,
    parent_bits: tuple[int, ...],
    family: FamilySpec,
    edge_budget: Optional[int],
) -> Iterator[tuple[int, ...]]:
    """All family-safe ways to attach one new vertex to a parent member."""
    np = n_new - 1
    cap = family.max_degree_cap
    capped_mask = 0
    if cap is not None:
        for v in range(np):
            if parent_bits[v].bit_count() >= cap:
                capped_mask |= 1 << v

    short_forbidden = sorted(
        k for k in family.forbidden_cycle_lengths if k <= 5
    )
    long_forbidden = sorted(
        k for k in family.forbidden_cycle_lengths if k > 5
    )
    path_masks = {
        k: _pair_path_masks(np, parent_bits, k - 2) for k in short_forbidden
    }

    parent_edges = sum(b.bit_count() for b in parent_bits) // 2
    twin = _twin_classes(np, parent_bits) if np else []

    seen_keys: set[tuple] = set()
    for subset in range(1 << np):
        size = subset.bit_count()
        if cap is not None and size > cap:
            continue
        if subset & capped_mask:
            continue
        if edge_budget is not None and parent_edges + size > edge_budget:
            continue
        key = tuple(sorted(twin[v] for v in _mask_vertices(subset)))
        if key in seen_keys:
            continue
        seen_keys.add(key)
        bad = False
        for k in short_forbidden:
            masks = path_masks[k]
            rest = subset
            while rest:
                low = rest & -rest
                rest ^= low
                if masks[low.bit_length() - 1] & subset:
                    bad = True
                    break
            if bad:
                break
        if bad:
            continue
        cand = tuple(
            (parent_bits[v] | (1 << np if (subset >> v) & 1 else 0))
            for v in range(np)
        ) + (subset,)
        if long_forbidden:
            g = _graph_from_bits(n_new, cand)
            from .graph import has_cycle_of_length

            if any(has_cycle_of_length(g, k) for k in long_forbidden):
                continue
        if family.require_planar and not _planar_bits(n_new, cand):
            continue
        yield cand


def _mask_vertices(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        mask ^= low
        yield low.bit_length() - 1


_LAYER_CACHE: dict[tuple[FamilySpec, int], list[tuple[int, ...]]] = {}


def clear_enumeration_cache() -> None:
    _LAYER_CACHE.clear()


def _family_layer(family: FamilySpec, n: int) -> list[tuple[int, ...]]:
    """All family members on exactly n vertices, one per isomorphism class."""
    family = family.normalize()
    key = (family, n)
    cached = _LAYER_CACHE.get(key)
    if cached is not None:
        return cached
    if n == 1:
        layer = [(0,)]
    else:
        from .bounds import density_bound

        edge_budget = (
            density_bound(family, n) if family.require_planar and n >= 3 else None
        )
        parents = _family_layer(family, n - 1)
        out: dict[tuple[int, ...], tuple[int, ...]] = {}
        for parent in parents:
            for cand in _extensions(n, parent, family, edge_budget):
                code = canonical_code(n, cand)
                if code not in out:
                    out[code] = cand
        layer = [out[code] for code in sorted(out)]
    _LAYER_CACHE[key] = layer
    return layer


def enumerate_family(config: GenConfig) -> Iterator[Graph]:
    """One representative per isomorphism class, deterministic order."""
    if config.mode != "exhaustive":
        raise ValueError("enumerate_family requires exhaustive mode")
    if config.n > EXHAUSTIVE_N_CAP:
        raise ValueError(f"exhaustive enumeration capped at n <= {EXHAUSTIVE_N_CAP}")
    for bits in _family_layer(config.family, config.n):
        g = _graph_from_bits(config.n, bits)
        if config.connected and not g.is_connected():
            continue
        yield g


def enumerate_graphs_with_max_edges(n: int, max_edges: int) -> Iterator[Graph]:
    """All graphs on n vertices with at most max_edges edges, one per iso class.

    Edge-layered growth with canonical dedup; the edge bound, not n,
    controls the explosion, so this works past the vertex-extension cap
    (used for sparse corpora like the small-size colorability checks).
    """
    layer: dict[tuple[int, ...], tuple[int, ...]] = {
        canonical_code(n, (0,) * n): (0,) * n
    }
    for code in sorted(layer):
        yield _graph_from_bits(n, layer[code])
    for _ in range(max_edges):
        nxt: dict[tuple[int, ...], tuple[int, ...]] = {}
        for bits in layer.values():
            twin = _twin_classes(n, bits)
            seen_pairs: set[tuple[int, int]] = set()
            for u in range(n):
                for v in range(u + 1, n):
                    if (bits[u] >> v) & 1:
                        continue
                    key = (min(twin[u], twin[v]), max(twin[u], twin[v]))
                    if key in seen_pairs:
                        continue
                    seen_pairs.add(key)
                    cand = list(bits)
                    cand[u] |= 1 << v
                    cand[v] |= 1 << u
                    cand_t = tuple(cand)
                    code = canonical_code(n, cand_t)
                    if code not in nxt:
                        nxt[code] = cand_t
        for code in sorted(nxt):
            yield _graph_from_bits(n, nxt[code])
        layer = nxt


# -- seeded random generation -----------------------------------------------


def random_family_graph(config: GenConfig) -> Graph:
    """First graph of the seeded random stream for this config."""
    return next(generate_stream(config))


def generate_stream(config: GenConfig) -> Iterator[Graph]:
    """Exhaustive stream or `count` seeded random members."""
    if config.mode == "exhaustive":
        yield from enumerate_family(config)
        return
    rng = random.Random(config.seed)
    for _ in range(config.count):
        yield _random_member(config, rng)


def _random_member(config: GenConfig, rng: random.Random) -> Graph:
    from .bounds import density_bound
    from .graph import _has_simple_path

    family = config.family.normalize()
    n = config.n
    target = density_bound(family, n) if family.require_planar and n >= 3 else None
    forbidden = sorted(family.forbidden_cycle_lengths)
    for _attempt in range(50):
        gnx = nx.Graph()
        gnx.add_nodes_from(range(n))
        cur = Graph(n, [])
        candidates = [(u, v) for u in range(n) for v in range(u + 1, n)]
        rng.shuffle(candidates)
        for u, v in candidates:
            if target is not None and cur.num_edges >= target:
                break
            if family.max_degree_cap is not None and (
                cur.degree(u) >= family.max_degree_cap
                or cur.degree(v) >= family.max_degree_cap
            ):
                continue
            # a forbidden k-cycle appears iff the new edge closes a path
            # of k-1 edges already present
            if any(_has_simple_path(cur, u, v, k - 1) for k in forbidden):
                continue
            gnx.add_edge(u, v)
            if family.require_planar and not nx.check_planarity(gnx, counterexample=False)[0]:
                gnx.remove_edge(u, v)
                continue
            cur = cur.add_edge(u, v)
        if not config.connected or cur.is_connected():
            return cur
    raise RuntimeError(
        "could not generate a connected family member; constraints too tight"
    )


# -- conjecture exception graphs ---------------------------------------------


def is_exception(g: Graph, m: int) -> tuple[bool, Optional[str]]:
    """Detect the excluded graphs: complete, odd cycle, K_{m,m} with m odd.

    Intended with m = max degree of a connected g.
    """
    n = g.n
    if g.num_edges == n * (n - 1) // 2 and g.max_degree() == m and n >= 1:
        return True, "complete"
    if (
        m == 2
        and n >= 3
        and n % 2 == 1
        and all(g.degree(v) == 2 for v in range(n))
        and g.is_connected()
    ):
        return True, "odd-cycle"
    if m % 2 == 1 and n == 2 * m and _is_balanced_biclique(g, m):
        return True, "balanced-biclique-odd-delta"
    return False, None


def _is_balanced_biclique(g: Graph, m: int) -> bool:
    if g.num_edges != m * m or any(g.degree(v) != m for v in range(g.n)):
        return False
    side = {0: 0}
    stack = [0]
    while stack:
        u = stack.pop()
        for w in g.neighbors(u):
            if w not in side:
                side[w] = 1 - side[u]
                stack.append(w)
            elif side[w] == side[u]:
                return False
    return len(side) == g.n and sum(side.values()) == m

"""Immutable simple undirected graphs and structural predicates.

Vertices are dense integer ids 0..n-1.  Adjacency is kept both as
per-vertex frozensets and (lazily) as per-vertex bitmasks; the bitmask
form is what the solvers and the exhaustive enumerator run on.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional, Sequence

import networkx as nx

__all__ = [
    "Graph",
    "FamilySpec",
    "FamilyReport",
    "girth",
    "has_cycle_of_length",
    "find_cycle_of_length",
    "is_planar",
    "edges_between",
    "matches_family",
    "parse_family",
    "read_edge_list",
    "write_edge_list",
    "complete_graph",
    "cycle_graph",
    "path_graph",
    "complete_bipartite",
]


class Graph:
    """Simple undirected graph, immutable after construction.

    Edge mutation helpers (`remove_edge`, `induced_subgraph`, ...) return
    new Graph values, so instances are safe to share across workers.
    """

    __slots__ = ("n", "_adj", "_edges", "_bits", "_planar", "_girth")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]]):
        if n < 0:
            raise ValueError("vertex count must be nonnegative")
        adj: list[set[int]] = [set() for _ in range(n)]
        edge_set: set[tuple[int, int]] = set()
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u},{v}) out of range for n={n}")
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            e = (u, v) if u < v else (v, u)
            if e in edge_set:
                raise ValueError(f"parallel edge ({e[0]},{e[1]})")
            edge_set.add(e)
            adj[u].add(v)
            adj[v].add(u)
        self.n = n
        self._adj = tuple(frozenset(s) for s in adj)
        self._edges = frozenset(edge_set)
        self._bits: Optional[tuple[int, ...]] = None
        self._planar: Optional[bool] = None
        self._girth: Optional[float] = None

    # -- basic accessors ------------------------------------------------

    @property
    def edges(self) -> frozenset[tuple[int, int]]:
        return self._edges

    @property
    def num_edges(self) -> int:
        return len(self._edges)

    def neighbors(self, v: int) -> frozenset[int]:
        return self._adj[v]

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def degrees(self) -> tuple[int, ...]:
        return tuple(len(s) for s in self._adj)

    def max_degree(self) -> int:
        return max((len(s) for s in self._adj), default=0)

    def min_degree(self) -> int:
        return min((len(s) for s in self._adj), default=0)

    def min_nonzero_degree(self) -> int:
        """Minimum degree over non-isolated vertices; 0 if the graph has no edges."""
        degs = [len(s) for s in self._adj if s]
        return min(degs) if degs else 0

    def adjacency_bits(self) -> tuple[int, ...]:
        """Per-vertex neighbor bitmasks; built lazily (avoid for huge n)."""
        if self._bits is None:
            bits = [0] * self.n
            for u, v in self._edges:
                bits[u] |= 1 << v
                bits[v] |= 1 << u
            self._bits = tuple(bits)
        return self._bits

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._adj[u]

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self._edges)

    # -- derived graphs --------------------------------------------------

    def remove_edge(self, u: int, v: int) -> "Graph":
        e = (u, v) if u < v else (v, u)
        if e not in self._edges:
            raise ValueError(f"edge ({u},{v}) not present")
        return Graph(self.n, self._edges - {e})

    def add_edge(self, u: int, v: int) -> "Graph":
        return Graph(self.n, list(self._edges) + [(u, v)])

    def induced_subgraph(self, vertices: Iterable[int]) -> tuple["Graph", list[int]]:
        """Induced subgraph on `vertices`; returns (graph, old ids by new id)."""
        old_ids = sorted(set(vertices))
        index = {old: new for new, old in enumerate(old_ids)}
        edges = [
            (index[u], index[v])
            for u, v in self._edges
            if u in index and v in index
        ]
        return Graph(len(old_ids), edges), old_ids

    def remove_vertex(self, v: int) -> tuple["Graph", list[int]]:
        return self.induced_subgraph(u for u in range(self.n) if u != v)

    def disjoint_union(self, other: "Graph") -> "Graph":
        off = self.n
        edges = list(self._edges) + [(u + off, v + off) for u, v in other._edges]
        return Graph(self.n + other.n, edges)

    def relabel(self, perm: Sequence[int]) -> "Graph":
        """Relabel with perm[old] = new; perm must be a permutation of 0..n-1."""
        if sorted(perm) != list(range(self.n)):
            raise ValueError("perm is not a permutation of the vertex ids")
        return Graph(self.n, ((perm[u], perm[v]) for u, v in self._edges))

    # -- misc -------------------------------------------------------------

    def is_connected(self) -> bool:
        if self.n <= 1:
            return True
        seen = {0}
        stack = [0]
        while stack:
            u = stack.pop()
            for w in self._adj[u]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == self.n

    def label_hash(self) -> str:
        """Stable hash of the labeled graph (not isomorphism-invariant)."""
        payload = f"{self.n};" + ";".join(f"{u},{v}" for u, v in self.sorted_edges())
        return hashlib.sha256(payload.encode()).hexdigest()[:16]

    def to_networkx(self) -> "nx.Graph":
        g = nx.Graph()
        g.add_nodes_from(range(self.n))
        g.add_edges_from(self._edges)
        return g

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Graph)
            and self.n == other.n
            and self._edges == other._edges
        )

    def __hash__(self) -> int:
        return hash((self.n, self._edges))

    def __reduce__(self):
        return (Graph, (self.n, sorted(self._edges)))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.num_edges})"


# -- small named graphs (test corpora, padding, CLI demos) ----------------


def complete_graph(n: int) -> Graph:
    return Graph(n, ((u, v) for u in range(n) for v in range(u + 1, n)))


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise ValueError("cycle needs at least 3 vertices")
    return Graph(n, ((i, (i + 1) % n) for i in range(n)))


def path_graph(n: int) -> Graph:
    return Graph(n, ((i, i + 1) for i in range(n - 1)))


def complete_bipartite(a: int, b: int) -> Graph:
    return Graph(a + b, ((u, a + v) for u in range(a) for v in range(b)))


# -- structural predicates -------------------------------------------------


def girth(g: Graph) -> float:
    """Length of a shortest cycle, math.inf for forests.

    Per-vertex BFS; a non-tree edge seen at distances d(u), d(w) closes a
    walk of length d(u)+d(w)+1 through the root, and the minimum over all
    roots is exact.
    """
    if g._girth is not None:
        return g._girth
    best = math.inf
    adj = g._adj
    for root in range(g.n):
        dist = {root: 0}
        parent = {root: -1}
        queue = [root]
        qi = 0
        while qi < len(queue):
            u = queue[qi]
            qi += 1
            du = dist[u]
            if 2 * du >= best:
                break
            for w in adj[u]:
                if w not in dist:
                    dist[w] = du + 1
                    parent[w] = u
                    queue.append(w)
                elif w != parent[u]:
                    cand = du + dist[w] + 1
                    if cand < best:
                        best = cand
    g._girth = best
    return best


def _has_simple_path(g: Graph, u: int, v: int, edge_count: int) -> bool:
    """True iff a simple path with exactly `edge_count` edges joins u and v."""
    if edge_count < 1:
        return u == v and edge_count == 0
    bits = g.adjacency_bits()
    target_bit = 1 << v

    def walk(cur: int, used: int, left: int) -> bool:
        if left == 1:
            return bool(bits[cur] & target_bit)
        frontier = bits[cur] & ~used & ~target_bit
        while frontier:
            low = frontier & -frontier
            frontier ^= low
            nxt = low.bit_length() - 1
            if walk(nxt, used | low, left - 1):
                return True
        return False

    return walk(u, (1 << u) | target_bit, edge_count) if u != v else False


def find_cycle_of_length(g: Graph, k: int) -> Optional[tuple[int, ...]]:
    """A simple cycle on exactly k vertices, or None.

    Every k-cycle uses some edge uv and leaves a (k-1)-edge path between
    its ends, so scanning edges with a depth-limited path search is exact.
    """
    if k < 3:
        raise ValueError("cycle length must be at least 3")
    bits = g.adjacency_bits()
    for u, v in g.sorted_edges():
        path = _trace_path(bits, u, v, k - 1)
        if path is not None:
            return tuple(path)
    return None


def _trace_path(bits: Sequence[int], u: int, v: int, edge_count: int):
    target_bit = 1 << v
    stack: list[int] = [u]

    def walk(cur: int, used: int, left: int):
        if left == 1:
            if bits[cur] & target_bit:
                stack.append(v)
                return True
            return False
        frontier = bits[cur] & ~used & ~target_bit
        while frontier:
            low = frontier & -frontier
            frontier ^= low
            nxt = low.bit_length() - 1
            stack.append(nxt)
            if walk(nxt, used | low, left - 1):
                return True
            stack.pop()
        return False

    if walk(u, (1 << u) | target_bit, edge_count):
        return stack
    return None


def has_cycle_of_length(g: Graph, k: int) -> bool:
    """True iff the graph contains a cycle on exactly k vertices (k >= 3)."""
    return find_cycle_of_length(g, k) is not None


def is_planar(g: Graph) -> bool:
    """Planarity via the left-right algorithm (near-linear); cached per graph."""
    if g._planar is None:
        g._planar = bool(nx.check_planarity(g.to_networkx(), counterexample=False)[0])
    return g._planar


def edges_between(g: Graph, u_set: Iterable[int], w_set: Iterable[int]) -> int:
    """Number of edges with one end in U and the other in W (U, W disjoint)."""
    u = frozenset(u_set)
    w = frozenset(w_set)
    if u & w:
        raise ValueError(f"vertex sets overlap: {sorted(u & w)}")
    count = 0
    for a in u:
        count += len(g.neighbors(a) & w)
    return count


# -- graph families --------------------------------------------------------


@dataclass(frozen=True)
class FamilySpec:
    """A constraint set: planarity, forbidden cycle lengths, girth, degree cap.

    Construct through `FamilySpec.make` (or `parse_family`) so that a
    min-girth constraint is normalized into the forbidden-cycle set.
    """

    require_planar: bool = False
    forbidden_cycle_lengths: frozenset[int] = frozenset()
    min_girth: Optional[int] = None
    max_degree_cap: Optional[int] = None

    @staticmethod
    def make(
        require_planar: bool = False,
        forbidden_cycle_lengths: Iterable[int] = (),
        min_girth: Optional[int] = None,
        max_degree_cap: Optional[int] = None,
    ) -> "FamilySpec":
        forbidden = set(forbidden_cycle_lengths)
        if any(k < 3 for k in forbidden):
            raise ValueError("forbidden cycle lengths must be >= 3")
        if min_girth is not None:
            if min_girth < 3:
                raise ValueError("min_girth must be >= 3")
            forbidden.update(range(3, min_girth))
        return FamilySpec(
            require_planar=require_planar,
            forbidden_cycle_lengths=frozenset(forbidden),
            min_girth=min_girth,
            max_degree_cap=max_degree_cap,
        )

    def normalize(self) -> "FamilySpec":
        return FamilySpec.make(
            self.require_planar,
            self.forbidden_cycle_lengths,
            self.min_girth,
            self.max_degree_cap,
        )

    def effective_min_girth(self) -> int:
        """Smallest cycle length the family does not forbid."""
        k = 3
        while k in self.forbidden_cycle_lengths:
            k += 1
        if self.min_girth is not None:
            k = max(k, self.min_girth)
        return k

    def is_unconstrained(self) -> bool:
        return not (
            self.require_planar
            or self.forbidden_cycle_lengths
            or self.max_degree_cap is not None
        )

    def to_token(self) -> str:
        parts = []
        if self.require_planar:
            parts.append("planar")
        if self.forbidden_cycle_lengths:
            parts.append("forbid=" + ",".join(map(str, sorted(self.forbidden_cycle_lengths))))
        if self.min_girth is not None:
            parts.append(f"girth={self.min_girth}")
        if self.max_degree_cap is not None:
            parts.append(f"maxdeg={self.max_degree_cap}")
        return "+".join(parts) if parts else "any"


FAMILY_ALIASES = {
    "triangle-free": "planar+forbid=3",
    "c4-free": "planar+forbid=4",
    "girth6": "planar+girth=6",
}


def parse_family(token: str) -> FamilySpec:
    """Parse a compact family token, e.g. 'planar+forbid=3+maxdeg=6'.

    Aliases: triangle-free, c4-free, girth6.  'any' means no constraints.
    """
    token = token.strip()
    base = FAMILY_ALIASES.get(token)
    extra = ""
    if base is None and "+" in token:
        head, rest = token.split("+", 1)
        if head in FAMILY_ALIASES:
            base, extra = FAMILY_ALIASES[head], "+" + rest
    spec = (base or token) + extra
    planar = False
    forbidden: set[int] = set()
    min_girth = None
    maxdeg = None
    for part in spec.split("+"):
        part = part.strip()
        if not part or part == "any":
            continue
        if part == "planar":
            planar = True
        elif part.startswith("forbid="):
            forbidden.update(int(x) for x in part[len("forbid="):].split(","))
        elif part.startswith("girth="):
            min_girth = int(part[len("girth="):])
        elif part.startswith("maxdeg="):
            maxdeg = int(part[len("maxdeg="):])
        else:
            raise ValueError(f"unknown family token {part!r}")
    return FamilySpec.make(planar, forbidden, min_girth, maxdeg)


@dataclass(frozen=True)
class FamilyReport:
    """Outcome of a family-membership check with the first violation, if any."""

    ok: bool
    constraint: Optional[str] = None
    witness: Optional[tuple] = None

    def __bool__(self) -> bool:
        return self.ok


def matches_family(g: Graph, f: FamilySpec) -> FamilyReport:
    """Check membership; on failure names the first violated constraint.

    Check order: planarity, forbidden cycles in ascending length, degree cap.
    """
    if f.require_planar and not is_planar(g):
        return FamilyReport(False, "planar", None)
    for k in sorted(f.forbidden_cycle_lengths):
        cyc = find_cycle_of_length(g, k)
        if cyc is not None:
            return FamilyReport(False, f"no-c{k}", cyc)
    if f.max_degree_cap is not None:
        for v in range(g.n):
            if g.degree(v) > f.max_degree_cap:
                return FamilyReport(False, f"maxdeg<={f.max_degree_cap}", (v, g.degree(v)))
    return FamilyReport(True)


# -- edge-list text format --------------------------------------------------
#
# Header line `p <n> <m>` (a literal `edge` token after `p` is tolerated),
# then exactly m lines `e <u> <v>` with 1-indexed endpoints.  Comment lines
# start with `c`; blank lines are ignored.


def read_edge_list(text: str) -> Graph:
    n = None
    m = None
    edges: list[tuple[int, int]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        parts = line.split()
        if parts[0] == "p":
            if n is not None:
                raise ValueError(f"line {lineno}: duplicate header")
            fields = parts[1:]
            if fields and fields[0] == "edge":
                fields = fields[1:]
            if len(fields) != 2:
                raise ValueError(f"line {lineno}: header must be 'p <n> <m>'")
            n, m = int(fields[0]), int(fields[1])
        elif parts[0] == "e":
            if n is None:
                raise ValueError(f"line {lineno}: edge before header")
            if len(parts) != 3:
                raise ValueError(f"line {lineno}: edge line must be 'e <u> <v>'")
            u, v = int(parts[1]), int(parts[2])
            if not (1 <= u <= n and 1 <= v <= n):
                raise ValueError(f"line {lineno}: endpoint out of range 1..{n}")
            edges.append((u - 1, v - 1))
        else:
            raise ValueError(f"line {lineno}: unrecognized line {line!r}")
    if n is None:
        raise ValueError("missing header line 'p <n> <m>'")
    if len(edges) != m:
        raise ValueError(f"header declares {m} edges but file has {len(edges)}")
    return Graph(n, edges)


def write_edge_list(g: Graph, comment: Optional[str] = None) -> str:
    lines = []
    if comment:
        for part in comment.splitlines():
            lines.append(f"c {part}")
    lines.append(f"p {g.n} {g.num_edges}")
    for u, v in g.sorted_edges():
        lines.append(f"e {u + 1} {v + 1}")
    return "\n".join(lines) + "\n"

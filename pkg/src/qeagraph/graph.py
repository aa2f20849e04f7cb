"""Finite simple graphs and the exact invariants the construction depends on.

Graphs are loop-free and undirected. Chromatic number is exact (branch and
bound with a DSATUR ordering), girth is computed by breadth-first search, and
forests report ``math.inf`` as their girth.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Iterable, Optional

from .errors import FormatError, InvalidParameter, ResourceLimit

CHROMATIC_NODE_CAP = 64

#: girth of an acyclic graph
INFINITE_GIRTH = math.inf


@dataclass(frozen=True)
class Graph:
    """An immutable loop-free undirected graph on nodes ``0 .. node_count-1``.

    Edges are stored as sorted pairs ``(u, w)`` with ``u < w``.
    """

    node_count: int
    edges: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        if self.node_count < 0:
            raise InvalidParameter(f"negative node count {self.node_count}")
        normal = set()
        for e in self.edges:
            u, w = e
            if u == w:
                raise InvalidParameter(f"self-loop at node {u}")
            if not (0 <= u < self.node_count and 0 <= w < self.node_count):
                raise InvalidParameter(f"edge {e} outside [0, {self.node_count})")
            normal.add((min(u, w), max(u, w)))
        object.__setattr__(self, "edges", frozenset(normal))

    @classmethod
    def from_edges(cls, node_count: int, edges: Iterable) -> "Graph":
        return cls(node_count, frozenset(tuple(e) for e in edges))

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    @cached_property
    def neighbours(self) -> tuple:
        """Adjacency as a tuple of bitmasks, one int per node."""
        masks = [0] * self.node_count
        for u, w in self.edges:
            masks[u] |= 1 << w
            masks[w] |= 1 << u
        return tuple(masks)

    def adjacent(self, u: int, w: int) -> bool:
        return (min(u, w), max(u, w)) in self.edges

    def degree(self, u: int) -> int:
        return self.neighbours[u].bit_count()

    def __repr__(self):
        return f"Graph(nodes={self.node_count}, edges={self.edge_count})"


# ---------------------------------------------------------------------------
# constructors


def build_standard(kind: str, k: int) -> Graph:
    """Return ``complete``, ``cycle``, ``path`` or ``edgeless`` on ``k`` nodes."""
    if k < 1:
        raise InvalidParameter(f"graph size must be >= 1, got {k}")
    if kind == "complete":
        edges = itertools.combinations(range(k), 2)
    elif kind == "cycle":
        if k < 3:
            raise InvalidParameter(f"a cycle needs at least 3 nodes, got {k}")
        edges = [(i, (i + 1) % k) for i in range(k)]
    elif kind == "path":
        edges = [(i, i + 1) for i in range(k - 1)]
    elif kind == "edgeless":
        edges = []
    else:
        raise InvalidParameter(f"unknown graph kind {kind!r}")
    return Graph.from_edges(k, edges)


def petersen() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph.from_edges(10, outer + spokes + inner)


def random_graph(node_count: int, edge_probability: float, seed: int) -> Graph:
    """Erdos-Renyi G(n, p) drawn from a seeded generator."""
    rng = random.Random(seed)
    edges = [
        pair
        for pair in itertools.combinations(range(node_count), 2)
        if rng.random() < edge_probability
    ]
    return Graph.from_edges(node_count, edges)


def disjoint_union(g: Graph, h: Graph) -> Graph:
    """Place ``h`` after ``g``, shifting its nodes by ``g.node_count``."""
    off = g.node_count
    edges = set(g.edges) | {(u + off, w + off) for u, w in h.edges}
    return Graph(g.node_count + h.node_count, frozenset(edges))


def mycielskian(g: Graph) -> Graph:
    """Mycielski's construction.

    Node ``u`` keeps its number, its shadow is ``u + n`` and the apex is
    ``2n``. Raises the chromatic number by one and preserves
    triangle-freeness.
    """
    n = g.node_count
    if n < 1:
        raise InvalidParameter("mycielskian needs at least one node")
    edges = set(g.edges)
    for u, w in g.edges:
        edges.add((u, w + n))
        edges.add((w, u + n))
    apex = 2 * n
    edges.update((u + n, apex) for u in range(n))
    return Graph(2 * n + 1, frozenset(edges))


# ---------------------------------------------------------------------------
# invariants


def is_independent(g: Graph, nodes: Iterable[int]) -> bool:
    """True iff no edge of ``g`` has both endpoints in ``nodes``."""
    mask = 0
    for u in nodes:
        if not 0 <= u < g.node_count:
            raise InvalidParameter(f"node {u} not in graph with {g.node_count} nodes")
        mask |= 1 << u
    nb = g.neighbours
    m = mask
    while m:
        low = m & -m
        u = low.bit_length() - 1
        if nb[u] & mask:
            return False
        m ^= low
    return True


def _greedy_clique(g: Graph) -> int:
    nb = g.neighbours
    best = 1 if g.node_count else 0
    for start in range(g.node_count):
        clique = 1 << start
        cand = nb[start]
        size = 1
        while cand:
            # take the candidate with most neighbours inside the candidate set
            u = max(_bits(cand), key=lambda v: (nb[v] & cand).bit_count())
            clique |= 1 << u
            cand &= nb[u]
            size += 1
        best = max(best, size)
    return best


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _dsatur_greedy(g: Graph) -> int:
    n = g.node_count
    nb = g.neighbours
    colour = [-1] * n
    forbidden = [0] * n
    used = 0
    for _ in range(n):
        u = max(
            (v for v in range(n) if colour[v] < 0),
            key=lambda v: (forbidden[v].bit_count(), nb[v].bit_count(), -v),
        )
        c = 0
        while forbidden[u] >> c & 1:
            c += 1
        colour[u] = c
        used = max(used, c + 1)
        for v in _bits(nb[u]):
            forbidden[v] |= 1 << c
    return used


def _colourable(g: Graph, k: int) -> bool:
    """Exact k-colourability by backtracking with DSATUR branching."""
    n = g.node_count
    nb = g.neighbours
    colour = [-1] * n
    # per-node count of neighbours holding each colour, so undo is exact
    counts = [[0] * k for _ in range(n)]
    sat = [0] * n
    full = (1 << k) - 1

    def pick():
        best, key = -1, None
        for v in range(n):
            if colour[v] < 0:
                kv = (sat[v].bit_count(), nb[v].bit_count())
                if key is None or kv > key:
                    best, key = v, kv
        return best

    def assign(u, c, sign):
        for v in _bits(nb[u]):
            row = counts[v]
            row[c] += sign
            if row[c] == 0:
                sat[v] &= ~(1 << c)
            else:
                sat[v] |= 1 << c

    def search(coloured, used):
        if coloured == n:
            return True
        u = pick()
        if sat[u] == full:
            return False
        # colours beyond the first unused one are symmetric
        for c in range(min(used + 1, k)):
            if sat[u] >> c & 1:
                continue
            colour[u] = c
            assign(u, c, 1)
            # forward check: an uncoloured neighbour with no colour left
            dead = any(colour[v] < 0 and sat[v] == full for v in _bits(nb[u]))
            if not dead and search(coloured + 1, max(used, c + 1)):
                return True
            assign(u, c, -1)
            colour[u] = -1
        return False

    return search(0, 0)


def chromatic_number(g: Graph, cap: int = CHROMATIC_NODE_CAP) -> int:
    """Exact chromatic number; 0 for the graph with no nodes.

    Iterative deepening from a clique lower bound up to a DSATUR upper bound.
    Graphs above ``cap`` nodes raise :class:`ResourceLimit` rather than
    returning an estimate.
    """
    if g.node_count > cap:
        raise ResourceLimit(f"chromatic number capped at {cap} nodes, graph has {g.node_count}")
    if g.node_count == 0:
        return 0
    if not g.edges:
        return 1
    upper = _dsatur_greedy(g)
    lower = max(2, _greedy_clique(g))
    for k in range(lower, upper):
        if _colourable(g, k):
            return k
    return upper


def girth(g: Graph) -> float:
    """Length of a shortest cycle, ``INFINITE_GIRTH`` for forests."""
    nb = g.neighbours
    best = INFINITE_GIRTH
    for root in range(g.node_count):
        dist = {root: 0}
        parent = {root: -1}
        frontier = [root]
        while frontier:
            nxt = []
            for u in frontier:
                # cycles through root found at depth d are at least 2d+1 long
                if 2 * dist[u] + 1 >= best:
                    nxt = []
                    break
                for w in _bits(nb[u]):
                    if w not in dist:
                        dist[w] = dist[u] + 1
                        parent[w] = u
                        nxt.append(w)
                    elif parent[u] != w:
                        best = min(best, dist[u] + dist[w] + 1)
            frontier = nxt
    return best


# ---------------------------------------------------------------------------
# witnesses of large girth and chromatic number


def _qualifies(g, min_girth, min_chi):
    return girth(g) >= min_girth and chromatic_number(g) >= min_chi


def _random_high_girth(rng: random.Random, nodes: int, min_girth: int) -> Graph:
    """Add random edges while every cycle stays at least ``min_girth`` long."""
    pairs = list(itertools.combinations(range(nodes), 2))
    rng.shuffle(pairs)
    adj = [set() for _ in range(nodes)]
    edges = []
    for u, w in pairs:
        # BFS from u up to depth min_girth - 2; an edge to w closes a cycle
        # of length dist(u, w) + 1
        dist = {u: 0}
        frontier = [u]
        close = False
        for depth in range(1, min_girth - 1):
            nxt = []
            for x in frontier:
                for y in adj[x]:
                    if y not in dist:
                        dist[y] = depth
                        nxt.append(y)
            if w in dist:
                close = True
                break
            frontier = nxt
        if close or w in dist:
            continue
        adj[u].add(w)
        adj[w].add(u)
        edges.append((u, w))
    return Graph.from_edges(nodes, edges)


def search_witness(min_girth: int, min_chi: int, seed: int, budget: int) -> Optional[Graph]:
    """Find a graph with girth >= ``min_girth`` and chromatic number >= ``min_chi``.

    Odd cycles and their iterated Mycielskians are tried first; they reach any
    chromatic number at girth 4. Seeded sparse random graphs follow. ``budget``
    counts candidate graphs examined. Every returned graph has been checked
    with the exact girth and chromatic-number routines; ``None`` means the
    budget ran out.
    """
    if min_girth < 3:
        raise InvalidParameter(f"min_girth must be >= 3, got {min_girth}")
    if min_chi < 1:
        raise InvalidParameter(f"min_chi must be >= 1, got {min_chi}")
    spent = 0
    length = max(3, min_girth)
    if length % 2 == 0:
        length += 1
    g = build_standard("cycle", length)
    while spent < budget and g.node_count <= CHROMATIC_NODE_CAP:
        spent += 1
        if girth(g) < min_girth:
            break
        if chromatic_number(g) >= min_chi:
            return g
        g = mycielskian(g)

    rng = random.Random(seed)
    while spent < budget:
        spent += 1
        nodes = rng.randint(max(min_chi, min_girth), 40)
        g = _random_high_girth(rng, nodes, min_girth)
        if _qualifies(g, min_girth, min_chi):
            return g
    return None


# ---------------------------------------------------------------------------
# text format


def format_graph(g: Graph) -> str:
    lines = [f"nodes {g.node_count}"]
    lines += [f"edge {u} {w}" for u, w in sorted(g.edges)]
    return "\n".join(lines) + "\n"


def parse_graph(text: str) -> Graph:
    """Parse ``nodes <v>`` followed by ``edge <u> <w>`` lines (``u < w``)."""
    node_count = None
    edges = []
    seen = set()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        try:
            nums = [int(p) for p in parts[1:]]
        except ValueError:
            raise FormatError(f"non-integer field in {line!r}", lineno) from None
        if node_count is None:
            if parts[0] != "nodes" or len(nums) != 1 or nums[0] < 0:
                raise FormatError("first line must be 'nodes <v>'", lineno)
            node_count = nums[0]
            continue
        if parts[0] != "edge" or len(nums) != 2:
            raise FormatError(f"expected 'edge <u> <w>', got {line!r}", lineno)
        u, w = nums
        if not 0 <= u < w < node_count:
            raise FormatError(f"edge needs 0 <= u < w < {node_count}, got {u} {w}", lineno)
        if (u, w) in seen:
            raise FormatError(f"duplicate edge {u} {w}", lineno)
        seen.add((u, w))
        edges.append((u, w))
    if node_count is None:
        raise FormatError("missing 'nodes' line")
    return Graph.from_edges(node_count, edges)


def read_graph(path) -> Graph:
    return parse_graph(Path(path).read_text())


def write_graph(g: Graph, path) -> None:
    Path(path).write_text(format_graph(g))

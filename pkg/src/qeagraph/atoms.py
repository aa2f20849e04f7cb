"""Atom structures built from a graph.

An atom is a pair ``(K, ~)``: a partial placement ``K`` sending each
coordinate ``i < n`` to a point ``(node, copy)`` of ``graph x n`` (or leaving
it undefined), together with an equivalence relation ``~`` on the
coordinates. Which pairs are atoms depends on the number of ``~``-blocks:

* ``n`` blocks: ``K`` is total and its range is *not* independent;
* ``n - 1`` blocks: ``K`` is defined exactly on the unique 2-element block,
  with equal values there;
* fewer blocks: ``K`` is nowhere defined.

Internally a structure is two integer matrices with one row per atom:
``rgs`` holds the partition in restricted-growth form and ``kcode`` holds
``node * n + copy`` for each defined slot and ``-1`` for undefined ones.
Rows are kept in canonical order (partition first, then placement).
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import FormatError, InvalidParameter, ResourceLimit
from .graph import Graph

MIN_DIM, MAX_DIM = 3, 6
ATOM_CAP = 500_000
# total placements enumerated while building (points ** n)
ENUMERATION_CAP = 50_000_000


class CopyRule(str, enum.Enum):
    """How points of ``graph x n`` are adjacent.

    ``TRANSPARENT``: ``(x, i) ~ (y, j)`` iff ``{x, y}`` is an edge.
    ``CLIQUE``: additionally, distinct copies of one node are adjacent.
    """

    TRANSPARENT = "copies-transparent"
    CLIQUE = "copies-clique"


class Signature(str, enum.Enum):
    DF = "Df"
    SC = "Sc"
    CA = "CA"
    QA = "QA"
    QEA = "QEA"

    @property
    def families(self) -> frozenset:
        """Relation families kept: cyl (c_i), diag (d_ij), repl (s^i_j), swap (s_ij)."""
        return _FAMILIES[self]

    def is_reduct_of(self, other: "Signature") -> bool:
        return self.families <= other.families


_FAMILIES = {
    Signature.DF: frozenset({"cyl"}),
    Signature.CA: frozenset({"cyl", "diag"}),
    Signature.SC: frozenset({"cyl", "repl"}),
    Signature.QA: frozenset({"cyl", "repl", "swap"}),
    Signature.QEA: frozenset({"cyl", "diag", "repl", "swap"}),
}


# ---------------------------------------------------------------------------
# partitions


def canonical_rgs(labels: Sequence[int]) -> tuple:
    """Relabel blocks in order of first appearance."""
    seen = {}
    return tuple(seen.setdefault(x, len(seen)) for x in labels)


def canonical_rows(labels: np.ndarray) -> np.ndarray:
    """Row-wise :func:`canonical_rgs` for an ``(m, n)`` integer array."""
    labels = np.asarray(labels)
    m, n = labels.shape
    if n == 0:
        return labels.astype(np.int8)
    same = labels[:, :, None] == labels[:, None, :]
    first = same.argmax(axis=2)
    is_first = first == np.arange(n)
    rank = np.cumsum(is_first, axis=1) - 1
    return np.take_along_axis(rank, first, axis=1).astype(np.int8)


def set_partitions(n: int) -> list:
    """All partitions of ``range(n)`` as restricted-growth tuples, in lex order."""
    out = []

    def grow(prefix, top):
        if len(prefix) == n:
            out.append(tuple(prefix))
            return
        for v in range(top + 2):
            grow(prefix + [v], max(top, v))

    if n == 0:
        return [()]
    grow([0], 0)
    return out


def stirling2(n: int, k: int) -> int:
    return sum((-1) ** j * math.comb(k, j) * (k - j) ** n for j in range(k + 1)) // math.factorial(k)


def bell(n: int) -> int:
    return sum(stirling2(n, k) for k in range(n + 1))


# ---------------------------------------------------------------------------
# atoms


@dataclass(frozen=True, order=False)
class Atom:
    """A single ``(K, ~)`` pair.

    ``placement[i]`` is ``None`` (undefined) or ``(node, copy)``;
    ``partition`` is a restricted-growth tuple.
    """

    placement: tuple
    partition: tuple

    @property
    def n(self) -> int:
        return len(self.partition)

    @property
    def block_count(self) -> int:
        return max(self.partition) + 1 if self.partition else 0

    def sort_key(self):
        slots = tuple(-1 if s is None else s[0] * self.n + s[1] for s in self.placement)
        return (self.partition, slots)

    def __str__(self):
        slots = " ".join("-" if s is None else f"{s[0]}.{s[1]}" for s in self.placement)
        return f"part {''.join(map(str, self.partition))} K {slots}"


def diag_membership(a: Atom, i: int, j: int) -> bool:
    """``a`` lies in the diagonal ``D_ij``: coordinates ``i`` and ``j`` share a block."""
    return a.partition[i] == a.partition[j]


def _related(part, p, q):
    return part[p] == part[q]


def equiv_cyl(a: Atom, b: Atom, i: int) -> bool:
    """``a ==_i b``: same value at ``i`` and the same relation away from ``i``."""
    if a.placement[i] != b.placement[i]:
        return False
    rest = [p for p in range(a.n) if p != i]
    return all(
        _related(a.partition, p, q) == _related(b.partition, p, q)
        for p, q in itertools.combinations(rest, 2)
    )


def equiv_swap(a: Atom, b: Atom, i: int, j: int) -> bool:
    """``a ==_ij b``: ``b`` is ``a`` with coordinates ``i`` and ``j`` exchanged.

    Placement values at ``i`` and ``j`` trade places and agree elsewhere. If
    ``i ~ j`` the relations are equal, otherwise ``b``'s relation is ``a``'s
    pulled back along the transposition.
    """
    K, L = a.placement, b.placement
    if K[i] != L[j] or K[j] != L[i]:
        return False
    if any(K[k] != L[k] for k in range(a.n) if k not in (i, j)):
        return False
    if _related(a.partition, i, j):
        return a.partition == b.partition
    swap = list(range(a.n))
    swap[i], swap[j] = j, i
    return all(
        _related(b.partition, p, q) == _related(a.partition, swap[p], swap[q])
        for p, q in itertools.combinations(range(a.n), 2)
    )


def _check_perm(tau, n):
    tau = tuple(tau)
    if len(tau) != n or sorted(tau) != list(range(n)):
        raise InvalidParameter(f"{tau} is not a permutation of range({n})")
    return tau


def apply_bijection(tau: Sequence[int], a: Atom) -> Atom:
    """``(K o tau, ~ o tau)``, with the partition renormalised."""
    tau = _check_perm(tau, a.n)
    placement = tuple(a.placement[t] for t in tau)
    partition = canonical_rgs(a.partition[t] for t in tau)
    return Atom(placement, partition)


def transposition(n: int, i: int, j: int) -> tuple:
    t = list(range(n))
    t[i], t[j] = j, i
    return tuple(t)


def compose(tau: Sequence[int], sigma: Sequence[int]) -> tuple:
    """``tau o sigma``: apply ``sigma`` first."""
    return tuple(tau[s] for s in sigma)


def points_adjacent(graph: Graph, rule: CopyRule, p: tuple, q: tuple) -> bool:
    (x, i), (y, j) = p, q
    if x != y and graph.adjacent(x, y):
        return True
    return rule is CopyRule.CLIQUE and x == y and i != j


def is_atom(a: Atom, graph: Graph, rule: CopyRule = CopyRule.TRANSPARENT) -> bool:
    """Check the three-way case split on the number of blocks."""
    n = a.n
    if len(a.placement) != n or canonical_rgs(a.partition) != tuple(a.partition):
        return False
    for s in a.placement:
        if s is not None and not (0 <= s[0] < graph.node_count and 0 <= s[1] < n):
            return False
    blocks = a.block_count
    if blocks == n:
        if any(s is None for s in a.placement):
            return False
        rng = set(a.placement)
        return any(points_adjacent(graph, rule, p, q) for p, q in itertools.combinations(rng, 2))
    if blocks == n - 1:
        pair = [p for p in range(n) if a.partition.count(a.partition[p]) == 2]
        defined = [p for p in range(n) if a.placement[p] is not None]
        return defined == pair and a.placement[pair[0]] == a.placement[pair[1]]
    return all(s is None for s in a.placement)


# ---------------------------------------------------------------------------
# the structure


class AtomStructure:
    """Canonically ordered atoms plus the relation families of a signature.

    ``graph`` is ``None`` for structures loaded from a dump.
    """

    def __init__(self, n, rgs, kcode, graph=None, rule=CopyRule.TRANSPARENT,
                 signature=Signature.QEA):
        self.n = int(n)
        self.rgs = np.ascontiguousarray(rgs, dtype=np.int8).reshape(-1, self.n)
        self.kcode = np.ascontiguousarray(kcode, dtype=np.int32).reshape(-1, self.n)
        if self.rgs.shape != self.kcode.shape:
            raise InvalidParameter(f"{self.rgs.shape[0]} partitions but {self.kcode.shape[0]} placements")
        self.graph = graph
        self.rule = CopyRule(rule)
        self.signature = Signature(signature)
        self.rgs.setflags(write=False)
        self.kcode.setflags(write=False)

    def __len__(self):
        return self.rgs.shape[0]

    def __repr__(self):
        return (f"AtomStructure(atoms={len(self)}, n={self.n}, rule={self.rule.value}, "
                f"signature={self.signature.value})")

    def atom(self, k: int) -> Atom:
        n = self.n
        placement = tuple(None if c < 0 else (int(c) // n, int(c) % n) for c in self.kcode[k])
        return Atom(placement, tuple(int(x) for x in self.rgs[k]))

    @cached_property
    def atoms(self) -> list:
        return [self.atom(k) for k in range(len(self))]

    def has(self, family: str) -> bool:
        return family in self.signature.families

    def require(self, family: str) -> None:
        if not self.has(family):
            raise InvalidParameter(f"{self.signature.value} structure has no {family} relations")

    # -- row lookup -------------------------------------------------------

    @cached_property
    def _encoder(self):
        n = self.n
        hi = int(self.kcode.max(initial=-1))
        base = max(hi + 2, n * max(1, self.graph.node_count if self.graph else 1) + 1)
        return n, base

    def _encode(self, rgs, kcode):
        n, base = self._encoder
        if n ** n * base ** n < 2 ** 62:
            key = np.zeros(rgs.shape[0], dtype=np.int64)
            for p in range(n):
                key = key * n + rgs[:, p].astype(np.int64)
            for p in range(n):
                key = key * base + (kcode[:, p].astype(np.int64) + 1)
            return key
        return np.array([r.tobytes() + k.tobytes() for r, k in
                         zip(rgs.astype(np.int8), kcode.astype(np.int32))], dtype=object)

    @cached_property
    def _index(self):
        keys = self._encode(self.rgs, self.kcode)
        order = np.argsort(keys, kind="stable")
        return keys[order], order

    def lookup(self, rgs: np.ndarray, kcode: np.ndarray) -> np.ndarray:
        """Index of each ``(rgs, kcode)`` row in the structure, ``-1`` if absent."""
        rgs = np.asarray(rgs).reshape(-1, self.n)
        kcode = np.asarray(kcode).reshape(-1, self.n)
        if len(self) == 0:
            return np.full(rgs.shape[0], -1, dtype=np.int64)
        sorted_keys, order = self._index
        keys = self._encode(rgs, kcode)
        pos = np.searchsorted(sorted_keys, keys)
        pos = np.minimum(pos, len(sorted_keys) - 1)
        n, base = self._encoder
        in_range = ((kcode >= -1) & (kcode <= base - 2)).all(axis=1) & \
            ((rgs >= 0) & (rgs < n)).all(axis=1)
        found = (sorted_keys[pos] == keys) & in_range
        return np.where(found, order[pos], -1).astype(np.int64)

    def index_of(self, a: Atom) -> int:
        kc = [-1 if s is None else s[0] * self.n + s[1] for s in a.placement]
        return int(self.lookup(np.array([a.partition]), np.array([kc]))[0])

    def __contains__(self, a: Atom) -> bool:
        return self.index_of(a) >= 0

    def apply_bijection_rows(self, tau: Sequence[int]):
        """``(rgs, kcode)`` of every atom moved by ``tau``."""
        tau = list(_check_perm(tau, self.n))
        return canonical_rows(self.rgs[:, tau]), self.kcode[:, tau]

    def block_counts(self) -> np.ndarray:
        return self.rgs.max(axis=1).astype(np.int64) + 1 if len(self) else np.zeros(0, np.int64)

    def replace_rows(self, rgs=None, kcode=None) -> "AtomStructure":
        """A copy with some rows replaced, in the given order (no re-sorting)."""
        return AtomStructure(self.n, self.rgs if rgs is None else rgs,
                             self.kcode if kcode is None else kcode,
                             self.graph, self.rule, self.signature)


def _check_dim(n):
    if not MIN_DIM <= n <= MAX_DIM:
        raise InvalidParameter(f"dimension must be in [{MIN_DIM}, {MAX_DIM}], got {n}")


def _point_adjacency(graph: Graph, n: int, rule: CopyRule) -> np.ndarray:
    v = graph.node_count
    node_adj = np.zeros((v, v), dtype=bool)
    for u, w in graph.edges:
        node_adj[u, w] = node_adj[w, u] = True
    adj = np.kron(node_adj, np.ones((n, n), dtype=bool))
    if rule is CopyRule.CLIQUE:
        adj |= np.kron(np.eye(v, dtype=bool), ~np.eye(n, dtype=bool))
    return adj


def _count_independent_by_size(graph: Graph, up_to: int) -> list:
    """Number of independent node sets of each size ``0..up_to``."""
    nb = graph.neighbours
    counts = [0] * (up_to + 1)

    def extend(size, allowed, start):
        counts[size] += 1
        if size == up_to:
            return
        for u in range(start, graph.node_count):
            if allowed >> u & 1:
                extend(size + 1, allowed & ~nb[u], u + 1)

    extend(0, (1 << graph.node_count) - 1, 0)
    return counts


def atom_count(graph: Graph, n: int, rule: CopyRule = CopyRule.TRANSPARENT) -> int:
    """Closed-form number of atoms, without enumerating them."""
    _check_dim(n)
    rule = CopyRule(rule)
    v = graph.node_count
    indep = _count_independent_by_size(graph, n)
    surj = [math.factorial(k) * stirling2(n, k) for k in range(n + 1)]
    if rule is CopyRule.TRANSPARENT:
        independent_total = sum(indep[k] * surj[k] for k in range(1, n + 1)) * n ** n
    else:
        independent_total = sum(indep[k] * surj[k] * n ** k for k in range(1, n + 1))
    total = (n * v) ** n - independent_total
    pair_blocks = math.comb(n, 2) * n * v
    coarse = bell(n) - 1 - math.comb(n, 2)
    return total + pair_blocks + coarse


def _non_independent_placements(adj: np.ndarray, n: int) -> np.ndarray:
    points = adj.shape[0]
    if points == 0 or not adj.any():
        return np.zeros((0, n), dtype=np.int32)
    chunks = []
    tail = n - 1
    grid = np.indices((points,) * tail, dtype=np.int32).reshape(tail, -1).T if tail else \
        np.zeros((1, 0), dtype=np.int32)
    for first in range(points):
        rows = np.empty((grid.shape[0], n), dtype=np.int32)
        rows[:, 0] = first
        rows[:, 1:] = grid
        bad = np.zeros(rows.shape[0], dtype=bool)
        for s, t in itertools.combinations(range(n), 2):
            bad |= adj[rows[:, s], rows[:, t]]
        chunks.append(rows[bad])
    return np.concatenate(chunks)


def build_eta(graph: Graph, n: int, rule: CopyRule = CopyRule.TRANSPARENT,
              cap: int = ATOM_CAP) -> AtomStructure:
    """Enumerate every atom over ``graph`` in dimension ``n``."""
    _check_dim(n)
    rule = CopyRule(rule)
    predicted = atom_count(graph, n, rule)
    if predicted > cap:
        raise ResourceLimit(f"{predicted} atoms exceeds cap {cap}")
    points = graph.node_count * n
    if points ** n > ENUMERATION_CAP:
        raise ResourceLimit(f"{points}**{n} placements exceeds enumeration cap {ENUMERATION_CAP}")

    rgs_parts, k_parts = [], []
    for part in set_partitions(n):
        blocks = max(part) + 1
        if blocks == n:
            ks = _non_independent_placements(_point_adjacency(graph, n, rule), n)
        elif blocks == n - 1:
            pair = [p for p in range(n) if part.count(part[p]) == 2]
            ks = np.full((points, n), -1, dtype=np.int32)
            ks[:, pair[0]] = ks[:, pair[1]] = np.arange(points, dtype=np.int32)
        else:
            ks = np.full((1, n), -1, dtype=np.int32)
        rgs_parts.append(np.tile(np.array(part, dtype=np.int8), (ks.shape[0], 1)))
        k_parts.append(ks)
    rgs = np.concatenate(rgs_parts)
    kcode = np.concatenate(k_parts)
    # lexsort: last key is primary
    keys = [kcode[:, p] for p in reversed(range(n))] + [rgs[:, p] for p in reversed(range(n))]
    order = np.lexsort(keys)
    return AtomStructure(n, rgs[order], kcode[order], graph, rule, Signature.QEA)


def reduct(s: AtomStructure, target) -> AtomStructure:
    """The same atoms with only the relation families of ``target``."""
    target = Signature(target)
    if not target.is_reduct_of(s.signature):
        raise InvalidParameter(f"{target.value} is not a reduct of {s.signature.value}")
    return AtomStructure(s.n, s.rgs, s.kcode, s.graph, s.rule, target)


def is_canonically_sorted(s: AtomStructure) -> bool:
    keys = [tuple(r) + tuple(k) for r, k in zip(s.rgs.tolist(), s.kcode.tolist())]
    return all(a < b for a, b in zip(keys, keys[1:]))


# ---------------------------------------------------------------------------
# relations over a whole structure, computed straight from the definitions
#
# A partition is encoded here as the bitmask of related coordinate pairs
# rather than by its restricted-growth string, so these routines share no
# code path with the operator tables of the complex algebra.


def coordinate_pairs(n: int) -> list:
    return list(itertools.combinations(range(n), 2))


def relation_masks(rgs: np.ndarray) -> np.ndarray:
    """Bit ``k`` set iff the ``k``-th coordinate pair is related."""
    rgs = np.asarray(rgs)
    mask = np.zeros(rgs.shape[0], dtype=np.int64)
    for k, (p, q) in enumerate(coordinate_pairs(rgs.shape[1])):
        mask |= (rgs[:, p] == rgs[:, q]).astype(np.int64) << k
    return mask


def _pairs_avoiding(n, i):
    return sum(1 << k for k, (p, q) in enumerate(coordinate_pairs(n)) if i not in (p, q))


def permuted_masks(masks: np.ndarray, n: int, tau: Sequence[int]) -> np.ndarray:
    """Masks of ``~ o tau``: ``(p, q)`` related iff ``(tau p, tau q)`` was."""
    pairs = coordinate_pairs(n)
    where = {pq: k for k, pq in enumerate(pairs)}
    out = np.zeros_like(masks)
    for k, (p, q) in enumerate(pairs):
        src = where[tuple(sorted((tau[p], tau[q])))]
        out |= ((masks >> src) & 1) << k
    return out


class DefinitionalRelations:
    """The relations ``D_ij``, ``==_i`` and ``==_ij`` over every atom at once."""

    def __init__(self, s: AtomStructure):
        self.s = s
        self.n = s.n
        self.K = s.kcode.astype(np.int64)
        self.masks = relation_masks(s.rgs)

    def diag(self, i: int, j: int) -> np.ndarray:
        pairs = coordinate_pairs(self.n)
        if i == j:
            return np.ones(len(self.s), dtype=bool)
        k = pairs.index((min(i, j), max(i, j)))
        return ((self.masks >> k) & 1).astype(bool)

    def cyl_features(self, i: int) -> np.ndarray:
        """Two atoms are ``==_i`` iff these rows are equal."""
        off = _pairs_avoiding(self.n, i)
        return np.stack([self.K[:, i], self.masks & off], axis=1)

    def cyl_rows(self, probes: Sequence[int], i: int) -> np.ndarray:
        f = self.cyl_features(i)
        probes = np.asarray(probes, dtype=np.int64)
        return (f[None, :, 0] == f[probes, 0][:, None]) & (f[None, :, 1] == f[probes, 1][:, None])

    def _keys(self, K: np.ndarray, masks: np.ndarray) -> np.ndarray:
        base = int(max(self.K.max(initial=-1), K.max(initial=-1))) + 2
        width = len(coordinate_pairs(self.n))
        if base ** self.n * 2 ** width >= 2 ** 62:
            raise ResourceLimit("placement codes too wide for 64-bit row keys")
        key = np.zeros(K.shape[0], dtype=np.int64)
        for p in range(self.n):
            key = key * base + (K[:, p] + 1)
        return (key << width) | masks

    def find(self, K: np.ndarray, masks: np.ndarray):
        """For each query row ``(K, mask)``, the indices of equal atoms.

        Returns ``(offsets, members)``: query ``q`` matches
        ``members[offsets[q]:offsets[q + 1]]``.
        """
        own = self._keys(self.K, self.masks)
        order = np.argsort(own, kind="stable")
        own_sorted = own[order]
        q = self._keys(K, masks)
        lo = np.searchsorted(own_sorted, q, side="left")
        hi = np.searchsorted(own_sorted, q, side="right")
        counts = hi - lo
        offsets = np.concatenate([[0], np.cumsum(counts)])
        idx = np.repeat(lo - offsets[:-1], counts) + np.arange(offsets[-1])
        return offsets, order[idx]

    def swap_targets(self, i: int, j: int):
        """Rows ``(K', mask')`` any ``b`` with ``a ==_ij b`` must have, per ``a``."""
        K = self.K.copy()
        K[:, [i, j]] = self.K[:, [j, i]]
        tau = transposition(self.n, i, j)
        same = self.diag(i, j)
        masks = np.where(same, self.masks, permuted_masks(self.masks, self.n, tau))
        return K, masks

    def swap_pairs(self, i: int, j: int):
        """All pairs ``(a, b)`` with ``a ==_ij b``, found by exact row matching."""
        K, masks = self.swap_targets(i, j)
        offsets, members = self.find(K, masks)
        src = np.repeat(np.arange(len(self.s), dtype=np.int64), np.diff(offsets))
        return src, members.astype(np.int64)

    def bijection_images(self, tau: Sequence[int]):
        """``(K o tau, ~ o tau)`` for every atom, as ``(K, mask)`` rows."""
        tau = list(tau)
        return self.K[:, tau], permuted_masks(self.masks, self.n, tau)


# ---------------------------------------------------------------------------
# dump format


def format_dump(s: AtomStructure) -> str:
    lines = [f"atoms {len(s)} dim {s.n} rule {s.rule.value}"]
    n = s.n
    for k, (r, kc) in enumerate(zip(s.rgs.tolist(), s.kcode.tolist())):
        slots = " ".join("-" if c < 0 else f"{c // n}.{c % n}" for c in kc)
        lines.append(f"atom {k} part {''.join(map(str, r))} K {slots}")
    return "\n".join(lines) + "\n"


def parse_dump(text: str) -> AtomStructure:
    """Read a dump back. Rows are taken as written; validity is not checked here."""
    lines = [(i, ln) for i, ln in enumerate(text.splitlines(), 1) if ln.strip()]
    if not lines:
        raise FormatError("empty dump")
    lineno, head = lines[0]
    parts = head.split()
    if len(parts) != 6 or parts[0] != "atoms" or parts[2] != "dim" or parts[4] != "rule":
        raise FormatError("header must be 'atoms <count> dim <n> rule <tag>'", lineno)
    try:
        count, n = int(parts[1]), int(parts[3])
        rule = CopyRule(parts[5])
    except ValueError as exc:
        raise FormatError(str(exc), lineno) from None
    if len(lines) - 1 != count:
        raise FormatError(f"header announces {count} atoms, found {len(lines) - 1}", lineno)
    rgs = np.zeros((count, n), dtype=np.int8)
    kcode = np.zeros((count, n), dtype=np.int32)
    for k, (lineno, line) in enumerate(lines[1:]):
        f = line.split()
        if len(f) != 5 + n or f[0] != "atom" or f[2] != "part" or f[4] != "K":
            raise FormatError(f"malformed atom line {line!r}", lineno)
        if f[1] != str(k):
            raise FormatError(f"expected atom index {k}, got {f[1]}", lineno)
        if len(f[3]) != n or not f[3].isdigit():
            raise FormatError(f"partition must be {n} digits", lineno)
        rgs[k] = [int(ch) for ch in f[3]]
        for p, slot in enumerate(f[5:]):
            if slot == "-":
                kcode[k, p] = -1
                continue
            try:
                node, copy = (int(x) for x in slot.split("."))
            except ValueError:
                raise FormatError(f"bad slot {slot!r}", lineno) from None
            if node < 0 or not 0 <= copy < n:
                raise FormatError(f"slot {slot!r} out of range", lineno)
            kcode[k, p] = node * n + copy
    return AtomStructure(n, rgs, kcode, None, rule, Signature.QEA)


def read_dump(path) -> AtomStructure:
    return parse_dump(Path(path).read_text())


def write_dump(s: AtomStructure, path) -> None:
    Path(path).write_text(format_dump(s))

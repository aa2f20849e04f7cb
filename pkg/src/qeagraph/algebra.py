"""The complex algebra over a finite atom structure.

Elements are dense boolean vectors indexed by atom. The operators work on
arrays of shape ``(..., H)`` so whole batches of elements can be pushed
through a term at once; :class:`Element` wraps a single vector for everyday
use.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Iterable, Optional, Sequence

import numpy as np
from scipy import sparse

from .atoms import AtomStructure, Signature, canonical_rows, transposition
from .errors import InvalidParameter, ResourceLimit

SUBALGEBRA_CAP = 1 << 16


class Element:
    """A set of atoms of one :class:`ComplexAlgebra`."""

    __slots__ = ("algebra", "bits")

    def __init__(self, algebra: "ComplexAlgebra", bits):
        bits = np.asarray(bits, dtype=bool)
        if bits.shape != (algebra.size,):
            raise InvalidParameter(f"element needs {algebra.size} bits, got shape {bits.shape}")
        bits.setflags(write=False)
        self.algebra = algebra
        self.bits = bits

    def _other(self, other):
        if not isinstance(other, Element):
            return NotImplemented
        if other.algebra is not self.algebra:
            raise InvalidParameter("elements of different algebras do not combine")
        return other.bits

    def __or__(self, other):
        b = self._other(other)
        return b if b is NotImplemented else Element(self.algebra, self.bits | b)

    def __and__(self, other):
        b = self._other(other)
        return b if b is NotImplemented else Element(self.algebra, self.bits & b)

    def __sub__(self, other):
        b = self._other(other)
        return b if b is NotImplemented else Element(self.algebra, self.bits & ~b)

    def __invert__(self):
        return Element(self.algebra, ~self.bits)

    def __le__(self, other):
        b = self._other(other)
        return b if b is NotImplemented else bool(np.all(~self.bits | b))

    def __eq__(self, other):
        if not isinstance(other, Element):
            return NotImplemented
        return other.algebra is self.algebra and bool(np.array_equal(self.bits, other.bits))

    def __hash__(self):
        return hash(self.bits.tobytes())

    def __len__(self):
        return int(self.bits.sum())

    def __bool__(self):
        return bool(self.bits.any())

    def __contains__(self, k):
        return bool(self.bits[k])

    def __iter__(self):
        return iter(self.indices())

    def indices(self) -> list:
        return np.flatnonzero(self.bits).tolist()

    def __repr__(self):
        return f"Element({self.indices()})"


class ComplexAlgebra:
    """Powerset algebra of an :class:`AtomStructure` with its operators.

    ``c_i`` is the closure under the ``==_i`` classes, ``d_ij`` the diagonal
    atoms, ``s^i_j x = c_i(x . d_ij)`` for ``i != j`` and ``s_ij`` the image
    under the coordinate swap, tabulated as an index map.
    """

    def __init__(self, structure: AtomStructure):
        s = structure
        self.structure = s
        self.n = n = s.n
        self.size = H = len(s)
        self.signature = s.signature

        self._classes = []
        for i in range(n):
            rest = [p for p in range(n) if p != i]
            off = canonical_rows(s.rgs[:, rest]).astype(np.int64)
            key = s.kcode[:, i].astype(np.int64) + 1
            for p in range(n - 1):
                key = key * n + off[:, p]
            _, ids = np.unique(key, return_inverse=True)
            ids = ids.ravel()
            order = np.argsort(ids, kind="stable")
            starts = np.searchsorted(ids[order], np.arange(ids.max() + 1 if H else 0))
            self._classes.append((ids, order, starts))

        self._diag = {}
        for i, j in itertools.product(range(n), repeat=2):
            self._diag[i, j] = s.rgs[:, i] == s.rgs[:, j]

        self._swap = {}
        for i, j in itertools.product(range(n), repeat=2):
            rgs, kcode = s.apply_bijection_rows(transposition(n, i, j))
            table = s.lookup(rgs, kcode)
            valid = table >= 0
            injective = len(np.unique(table[valid])) == valid.sum()
            matrix = None
            if not injective:
                src = np.flatnonzero(valid)
                matrix = sparse.csr_matrix(
                    (np.ones(len(src), dtype=np.int32), (src, table[valid])), shape=(H, H))
            self._swap[i, j] = (table, valid, matrix)

    def __repr__(self):
        return f"ComplexAlgebra({self.structure!r})"

    # -- elements ---------------------------------------------------------

    @property
    def top(self) -> Element:
        return Element(self, np.ones(self.size, dtype=bool))

    @property
    def bottom(self) -> Element:
        return Element(self, np.zeros(self.size, dtype=bool))

    def element(self, indices: Iterable[int]) -> Element:
        idx = np.asarray(list(indices), dtype=np.int64)
        if idx.size and (idx.min() < 0 or idx.max() >= self.size):
            raise InvalidParameter(f"atom index out of range for {self.size} atoms")
        bits = np.zeros(self.size, dtype=bool)
        bits[idx] = True
        return Element(self, bits)

    def atom(self, k: int) -> Element:
        return self.element([k])

    def atoms(self) -> list:
        return [self.atom(k) for k in range(self.size)]

    def _own(self, x: Element) -> np.ndarray:
        if x.algebra is not self:
            raise InvalidParameter("element belongs to a different algebra")
        return x.bits

    def _index(self, *idx):
        for i in idx:
            if not 0 <= i < self.n:
                raise InvalidParameter(f"index {i} out of range for dimension {self.n}")

    # -- batched operators on (..., H) arrays --------------------------------

    def cyl_classes(self, i: int) -> np.ndarray:
        """Class id of each atom under ``==_i``; ``c_i {b}`` is b's class."""
        self._index(i)
        return self._classes[i][0]

    def cyl_bits(self, i: int, X: np.ndarray) -> np.ndarray:
        ids, order, starts = self._classes[i]
        if self.size == 0:
            return X.copy()
        hit = np.logical_or.reduceat(X[..., order], starts, axis=-1)
        return hit[..., ids]

    def diag_bits(self, i: int, j: int) -> np.ndarray:
        return self._diag[i, j]

    def repl_bits(self, i: int, j: int, X: np.ndarray) -> np.ndarray:
        if i == j:
            return X.copy()
        return self.cyl_bits(i, X & self._diag[i, j])

    def swap_bits(self, i: int, j: int, X: np.ndarray) -> np.ndarray:
        table, valid, matrix = self._swap[i, j]
        if matrix is not None:
            flat = X.reshape(-1, self.size).astype(np.int32)
            return (np.asarray(flat @ matrix) > 0).reshape(X.shape)
        out = np.zeros_like(X)
        out[..., table[valid]] = X[..., valid]
        return out

    # -- element operators --------------------------------------------------

    def cyl(self, i: int, x: Element) -> Element:
        self.structure.require("cyl")
        self._index(i)
        return Element(self, self.cyl_bits(i, self._own(x)))

    def diag(self, i: int, j: int) -> Element:
        self.structure.require("diag")
        self._index(i, j)
        return Element(self, self._diag[i, j])

    def subst_repl(self, i: int, j: int, x: Element) -> Element:
        self.structure.require("repl")
        self._index(i, j)
        return Element(self, self.repl_bits(i, j, self._own(x)))

    def subst_swap(self, i: int, j: int, x: Element) -> Element:
        self.structure.require("swap")
        self._index(i, j)
        return Element(self, self.swap_bits(i, j, self._own(x)))

    def swap_table(self, i: int, j: int) -> np.ndarray:
        """Index of the swapped image of each atom, ``-1`` where it is missing."""
        return self._swap[i, j][0]

    def operators(self) -> list:
        """Every unary operator of the signature as ``(name, fn)`` on bit arrays."""
        fams = self.signature.families
        ops = []
        n = self.n
        if "cyl" in fams:
            ops += [(f"c{i}", lambda X, i=i: self.cyl_bits(i, X)) for i in range(n)]
        if "repl" in fams or "diag" in fams:
            # s^i_j is definable from c_i and d_ij, so CA keeps it too
            ops += [(f"s{i}{j}", lambda X, i=i, j=j: self.repl_bits(i, j, X))
                    for i, j in itertools.product(range(n), repeat=2)]
        if "swap" in fams:
            ops += [(f"p{i}{j}", lambda X, i=i, j=j: self.swap_bits(i, j, X))
                    for i, j in itertools.product(range(n), repeat=2)]
        return ops

    def constants(self) -> list:
        if "diag" not in self.signature.families:
            return []
        return [(f"d{i}{j}", self._diag[i, j]) for i, j in itertools.product(range(self.n), repeat=2)]


def complex_algebra(structure: AtomStructure) -> ComplexAlgebra:
    return ComplexAlgebra(structure)


def dimension_set(x: Element) -> frozenset:
    """Coordinates ``i`` with ``c_i x != x``."""
    a = x.algebra
    return frozenset(i for i in range(a.n) if not np.array_equal(a.cyl_bits(i, x.bits), x.bits))


# ---------------------------------------------------------------------------
# generated subalgebras


def _refine(labels: np.ndarray, bits: np.ndarray) -> np.ndarray:
    _, new = np.unique(labels * 2 + bits.astype(np.int64), return_inverse=True)
    return new.ravel()


def subalgebra_cells(a: ComplexAlgebra, gens: Sequence[Element]) -> np.ndarray:
    """Atoms of the generated subalgebra, as a cell label for every atom.

    A subalgebra of a finite Boolean algebra is fixed by its atoms, which
    partition ``H``. Every operator is additive, so closure under it means
    its value on each cell is a union of cells. Refine until that holds.
    """
    labels = np.zeros(a.size, dtype=np.int64)
    for x in gens:
        labels = _refine(labels, a._own(x))
    for _, d in a.constants():
        labels = _refine(labels, d)
    ops = a.operators()
    while True:
        count = labels.max() + 1 if a.size else 0
        cells = labels[None, :] == np.arange(count)[:, None]
        before = count
        for _, fn in ops:
            for row in fn(cells):
                labels = _refine(labels, row)
        if (labels.max() + 1 if a.size else 0) == before:
            return labels


def generated_subalgebra(a: ComplexAlgebra, gens: Sequence[Element],
                         cap: int = SUBALGEBRA_CAP) -> frozenset:
    """Every element of the subalgebra generated by ``gens`` and the constants."""
    labels = subalgebra_cells(a, gens)
    count = int(labels.max() + 1) if a.size else 0
    if 2 ** count > cap:
        raise ResourceLimit(f"subalgebra has 2**{count} elements, cap is {cap}")
    cells = labels[None, :] == np.arange(count)[:, None]
    out = set()
    for choice in itertools.product((False, True), repeat=count):
        pick = np.array(choice, dtype=bool)
        out.add(Element(a, cells[pick].any(axis=0) if count else np.zeros(a.size, bool)))
    return frozenset(out)


# ---------------------------------------------------------------------------
# frames


@dataclass
class Frame:
    """A finite relational structure on points ``0 .. size-1``.

    Binary relations follow the atom-structure convention: for operator
    ``f``, ``R_f(p0, p1)`` holds iff ``p0`` lies in ``f({p1})``.
    ``binary(name, probes)`` returns one row per probe ``p1``; ``unary(name)``
    returns a membership vector. Relations are computed on demand.
    """

    size: int
    n: int
    signature: Signature
    binary: Callable[[str, Sequence[int]], np.ndarray]
    unary: Callable[[str], np.ndarray]

    def relation_names(self) -> tuple:
        fams = self.signature.families
        n = self.n
        pairs = list(itertools.product(range(n), repeat=2))
        binary = [f"c{i}" for i in range(n)] if "cyl" in fams else []
        if "repl" in fams:
            binary += [f"s{i}{j}" for i, j in pairs]
        if "swap" in fams:
            binary += [f"p{i}{j}" for i, j in pairs]
        unary = [f"d{i}{j}" for i, j in pairs] if "diag" in fams else []
        return tuple(binary), tuple(unary)


def _operator_by_name(a: ComplexAlgebra, name: str):
    kind, idx = name[0], [int(ch) for ch in name[1:]]
    if kind == "c":
        return lambda X: a.cyl_bits(idx[0], X)
    if kind == "s":
        return lambda X: a.repl_bits(idx[0], idx[1], X)
    if kind == "p":
        return lambda X: a.swap_bits(idx[0], idx[1], X)
    raise InvalidParameter(f"unknown operator {name!r}")


def _singletons(size, probes):
    probes = np.asarray(probes, dtype=np.int64)
    rows = np.zeros((len(probes), size), dtype=bool)
    rows[np.arange(len(probes)), probes] = True
    return rows


def atom_frame(a: ComplexAlgebra) -> Frame:
    """``At(Cm S)``: atoms of the algebra with ``R_f(b0, b1) iff b0 <= f(b1)``."""
    def binary(name, probes):
        return _operator_by_name(a, name)(_singletons(a.size, probes))

    def unary(name):
        return a.diag_bits(int(name[1]), int(name[2])).copy()

    return Frame(a.size, a.n, a.signature, binary, unary)


def ultrafilter_frame(a: ComplexAlgebra) -> Frame:
    """Ultrafilter frame of a finite algebra.

    Ultrafilters of a finite Boolean algebra are the principal filters
    ``up(b)`` over atoms ``b``; point ``k`` stands for ``up(atom k)``.
    ``R_f(mu0, mu1)`` requires ``f(x)`` in ``mu0`` for every ``x`` in ``mu1``;
    ``f`` is monotone and ``{b1}`` is the least member of ``mu1``, so the
    condition is ``f({b1})`` in ``mu0``, i.e. ``b0`` in ``f({b1})``.
    """
    def binary(name, probes):
        # row r, column b0: is f({probes[r]}) a member of up(b0)?
        least = _operator_by_name(a, name)(_singletons(a.size, probes))
        return least

    def unary(name):
        # up(b) contains d_ij iff b <= d_ij
        return a.diag_bits(int(name[1]), int(name[2])).copy()

    return Frame(a.size, a.n, a.signature, binary, unary)


def structure_frame(s: AtomStructure) -> Frame:
    """The relations of ``s`` itself, evaluated from the atom definitions."""
    from .atoms import DefinitionalRelations

    rel = DefinitionalRelations(s)
    H = len(s)
    pairs = {}

    def binary(name, probes):
        kind, idx = name[0], [int(ch) for ch in name[1:]]
        probes = np.asarray(probes, dtype=np.int64)
        if kind == "c":
            return rel.cyl_rows(probes, idx[0])
        if kind == "s":
            i, j = idx
            if i == j:
                return _singletons(H, probes)
            rows = rel.cyl_rows(probes, i)
            return rows & rel.diag(i, j)[probes][:, None]
        if kind == "p":
            key = tuple(idx)
            if key not in pairs:
                pairs[key] = rel.swap_pairs(*key)
            src, dst = pairs[key]
            row = np.full(H, -1, dtype=np.int64)
            row[probes] = np.arange(len(probes))
            keep = row[src] >= 0
            out = np.zeros((len(probes), H), dtype=bool)
            out[row[src[keep]], dst[keep]] = True
            return out
        raise InvalidParameter(f"unknown relation {name!r}")

    def unary(name):
        return rel.diag(int(name[1]), int(name[2]))

    return Frame(H, s.n, s.signature, binary, unary)


def compare_frames(f: Frame, g: Frame, probes: Optional[Sequence[int]] = None,
                   chunk: int = 512):
    """First disagreement between two frames as ``(relation, p1, p0)``, or ``None``.

    The identity map on points is the isomorphism being tested. ``probes``
    restricts the second argument of binary relations; default is all points.
    """
    if f.size != g.size or f.relation_names() != g.relation_names():
        return ("shape", -1, -1)
    binary, unary = f.relation_names()
    for name in unary:
        diff = np.flatnonzero(f.unary(name) != g.unary(name))
        if len(diff):
            return (name, -1, int(diff[0]))
    probes = np.arange(f.size) if probes is None else np.asarray(probes, dtype=np.int64)
    for name in binary:
        for start in range(0, len(probes), chunk):
            block = probes[start:start + chunk]
            diff = f.binary(name, block) != g.binary(name, block)
            if diff.any():
                r, b0 = np.argwhere(diff)[0]
                return (name, int(block[r]), int(b0))
    return None


# ---------------------------------------------------------------------------
# simplicity


def is_simple_witness(a: ComplexAlgebra) -> Optional[int]:
    """``None`` if ``c_0 c_1 ... c_(n-1) {b}`` is the top for every atom ``b``.

    Otherwise the index of an atom where it is not. ``c_(n-1) {b}`` is the
    ``==_(n-1)`` class of ``b``, so one chain per class covers every atom;
    complete additivity then extends the result to all non-zero elements.
    """
    if a.size == 0:
        return None
    last = a.n - 1
    ids = a.cyl_classes(last)
    reps = np.unique(ids, return_index=True)[1]
    for start in range(0, len(reps), 256):
        block = reps[start:start + 256]
        X = ids[None, :] == ids[block][:, None]
        for i in reversed(range(last)):
            X = a.cyl_bits(i, X)
        bad = np.flatnonzero(~X.all(axis=1))
        if len(bad):
            return int(block[bad[0]])
    return None

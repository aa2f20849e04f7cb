"""Check suites over atom structures and their complex algebras.

Every check yields a :class:`CheckReport`. Checks that read the structure
work from :class:`~qeagraph.atoms.DefinitionalRelations`, which matches
atoms row by row from the definitions. The algebra's operator tables are
never consulted by these checks, so each table is validated by a separate
route rather than by itself.
"""

from __future__ import annotations

import itertools
import json
import time
from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np

from .algebra import (ComplexAlgebra, atom_frame, compare_frames, is_simple_witness,
                      structure_frame, ultrafilter_frame)
from .atoms import (AtomStructure, CopyRule, DefinitionalRelations, Signature, _point_adjacency,
                    build_eta, canonical_rows, reduct)
from .graph import Graph
from .terms import Strategy, check_equation, expand_suite, load_suite, random_elements

PASS, FAIL, SKIP = "PASS", "FAIL", "SKIP"
LEMMA_BUDGET = 5000
# literal H x H relation matrices are only built below this size
MATRIX_BUDGET = 3000
# frames and additivity are compared on every atom up to this size, sampled above
EXHAUSTIVE_PROBES = 4096
SAMPLED_PROBES = 96

_ANCHORS = {"C": "cylindric-postulates", "D": "replacement-definition",
            "S": "replacement-laws", "P": "transposition-laws"}


@dataclass
class CheckReport:
    check_id: str
    anchor: str
    status: str
    counterexample: Optional[dict] = None
    items: int = 0
    elapsed: float = 0.0
    details: str = ""

    def __post_init__(self):
        if self.status == FAIL and not self.counterexample:
            raise ValueError(f"failed check {self.check_id} needs a counterexample")

    @property
    def failed(self) -> bool:
        return self.status == FAIL

    def line(self) -> str:
        """``CHECK <id> <status> <anchor> <details>``, timing left out so runs compare equal."""
        parts = [f"items={self.items}"]
        if self.details:
            parts.append(self.details)
        if self.counterexample:
            parts.append("cex=" + json.dumps(self.counterexample, sort_keys=True, separators=(",", ":")))
        return f"CHECK {self.check_id} {self.status} {self.anchor} {' '.join(parts)}"


def _timed(check_id, anchor, fn, *args):
    t0 = time.perf_counter()
    status, items, cex, details = fn(*args)
    return CheckReport(check_id, anchor, status, cex, int(items), time.perf_counter() - t0, details)


def _atom_text(s, k):
    return str(s.atom(int(k)))


# ---------------------------------------------------------------------------
# structure checks


def _validity(s: AtomStructure):
    n, H = s.n, len(s)
    rgs, K = s.rgs.astype(np.int64), s.kcode.astype(np.int64)
    bad = np.zeros(H, dtype=bool)
    reason = np.full(H, "", dtype=object)

    def flag(mask, why):
        new = mask & ~bad
        reason[new] = why
        bad[:] |= mask

    flag(np.any(canonical_rows(rgs) != rgs, axis=1), "partition not in restricted-growth form")
    blocks = rgs.max(axis=1) + 1
    defined = K >= 0
    total = blocks == n
    flag(total & ~defined.all(axis=1), "n blocks but placement not total")
    if s.graph is not None:
        points = s.graph.node_count * n
        flag(np.any(K >= points, axis=1), "placement outside graph x n")
        adj = _point_adjacency(s.graph, n, s.rule)
        ok = total & defined.all(axis=1) & ~np.any(K >= points, axis=1)
        dependent = np.zeros(H, dtype=bool)
        rows = np.flatnonzero(ok)
        for p, q in itertools.combinations(range(n), 2):
            dependent[rows] |= adj[K[rows, p], K[rows, q]]
        flag(ok & ~dependent, "placement range is independent")
    pair = blocks == n - 1
    if pair.any():
        # coordinates sharing a block with someone else
        shared = np.zeros((H, n), dtype=bool)
        for p, q in itertools.combinations(range(n), 2):
            eq = rgs[:, p] == rgs[:, q]
            shared[:, p] |= eq
            shared[:, q] |= eq
        flag(pair & np.any(shared != defined, axis=1), "placement not defined exactly on the 2-block")
        vals = np.where(shared, K, -2)
        lo = np.where(shared, K, np.iinfo(np.int64).max).min(axis=1)
        hi = vals.max(axis=1)
        flag(pair & (lo != hi), "unequal values on the 2-block")
    flag((blocks < n - 1) & defined.any(axis=1), "placement defined with n-2 or fewer blocks")
    keys = np.concatenate([rgs, K], axis=1)
    if H > 1:
        diff = keys[1:] - keys[:-1]
        nz = diff != 0
        first = np.argmax(nz, axis=1)
        step = diff[np.arange(H - 1), first]
        order_bad = ~nz.any(axis=1) | (step < 0)
        flag(np.concatenate([[False], order_bad]), "atom duplicated or out of canonical order")
    hits = np.flatnonzero(bad)
    if len(hits):
        k = int(hits[0])
        return FAIL, H, {"atom": k, "text": _atom_text(s, k), "reason": reason[k],
                         "violations": int(len(hits))}, ""
    return PASS, H, None, "" if s.graph is not None else "graph unknown, independence not checked"


def _match_one(rel, K, masks):
    """Index of the unique atom equal to each query row, ``-1`` if none, ``-2`` if several."""
    offsets, members = rel.find(K, masks)
    counts = np.diff(offsets)
    out = np.full(len(counts), -1, dtype=np.int64)
    one = counts == 1
    out[one] = members[offsets[:-1][one]]
    out[counts > 1] = -2
    return out


def _bijection_closure(s, rel):
    n, H = s.n, len(s)
    items = 0
    for tau in itertools.permutations(range(n)):
        K, masks = rel.bijection_images(tau)
        hit = _match_one(rel, K, masks)
        items += H
        miss = np.flatnonzero(hit == -1)
        if len(miss):
            k = int(miss[0])
            return FAIL, items, {"perm": list(tau), "atom": k, "text": _atom_text(s, k)}, ""
    return PASS, items, None, f"perms={items // max(H, 1)}"


def _all_swap_pairs(s, rel):
    return {(i, j): rel.swap_pairs(i, j) for i, j in itertools.product(range(s.n), repeat=2)}


def _swap_identity(s, pairs):
    items = 0
    for i in range(s.n):
        src, dst = pairs[i, i]
        items += len(src)
        wrong = np.flatnonzero(src != dst)
        if len(wrong):
            return FAIL, items, {"i": i, "atom": int(src[wrong[0]]), "partner": int(dst[wrong[0]])}, ""
        lonely = np.setdiff1d(np.arange(len(s)), src)
        if len(lonely):
            return FAIL, items, {"i": i, "atom": int(lonely[0]), "partner": None}, ""
    return PASS, items, None, ""


def _swap_symmetric(s, pairs):
    items = 0
    for i, j in itertools.combinations(range(s.n), 2):
        a = set(zip(*(x.tolist() for x in pairs[i, j])))
        b = set(zip(*(x.tolist() for x in pairs[j, i])))
        items += len(a | b)
        if a != b:
            src, dst = min(a ^ b)
            return FAIL, items, {"i": i, "j": j, "atom": src, "partner": dst}, ""
    return PASS, items, None, ""


def _swap_functional(s, pairs):
    items = 0
    for (i, j), (src, dst) in pairs.items():
        counts = np.bincount(src, minlength=len(s))
        items += len(s)
        many = np.flatnonzero(counts > 1)
        if len(many):
            k = int(many[0])
            return FAIL, items, {"i": i, "j": j, "atom": k, "partners": dst[src == k].tolist()}, ""
    return PASS, items, None, ""


def _swap_image(s, pairs):
    items = 0
    for (i, j), (src, dst) in pairs.items():
        items += len(s)
        missing = np.setdiff1d(np.arange(len(s)), dst)
        if len(missing):
            k = int(missing[0])
            return FAIL, items, {"i": i, "j": j, "atom": k, "text": _atom_text(s, k)}, ""
    return PASS, items, None, ""


def _cyl_swap_witness(s, rel, pairs):
    """For ``a`` in ``D_ij``: ``a ==_i b`` iff some ``c`` has ``a ==_j c`` and ``b ==_ij c``."""
    H, items = len(s), 0
    for i, j in itertools.product(range(s.n), repeat=2):
        Fi, Fj = rel.cyl_features(i), rel.cyl_features(j)
        src, dst = pairs[i, j]
        members = np.flatnonzero(rel.diag(i, j))
        # atoms with equal ==_i and ==_j features behave identically here
        combo = np.concatenate([Fi[members], Fj[members]], axis=1)
        _, first, inverse = np.unique(combo, axis=0, return_index=True, return_inverse=True)
        for g, rep in enumerate(members[first]):
            lhs = np.all(Fi == Fi[rep], axis=1)
            rhs = np.zeros(H, dtype=bool)
            rhs[src[np.all(Fj[dst] == Fj[rep], axis=1)]] = True
            items += int(np.sum(inverse.ravel() == g)) * H
            bad = np.flatnonzero(lhs != rhs)
            if len(bad):
                return FAIL, items, {"i": i, "j": j, "atom": int(rep), "other": int(bad[0]),
                                     "cyl_related": bool(lhs[bad[0]])}, ""
    return PASS, items, None, ""


def _swap_is_transposition(s, pairs):
    items = 0
    for i, j in itertools.combinations(range(s.n), 2):
        rgs, kcode = s.apply_bijection_rows(_transposition(s.n, i, j))
        image = s.lookup(rgs, kcode)
        src, dst = pairs[i, j]
        expect = set(zip(np.flatnonzero(image >= 0).tolist(), image[image >= 0].tolist()))
        got = set(zip(src.tolist(), dst.tolist()))
        items += len(s)
        if expect != got:
            a, b = min(expect ^ got)
            return FAIL, items, {"i": i, "j": j, "atom": a, "partner": b}, ""
    return PASS, items, None, ""


def _transposition(n, i, j):
    tau = list(range(n))
    tau[i], tau[j] = j, i
    return tau


def _cyl_equivalence(s, rel):
    H = len(s)
    if H > MATRIX_BUDGET:
        return SKIP, 0, None, f"atoms={H} exceeds matrix budget {MATRIX_BUDGET}"
    items = 0
    for i in range(s.n):
        M = rel.cyl_rows(np.arange(H), i)
        items += H * H
        if not M.diagonal().all():
            k = int(np.flatnonzero(~M.diagonal())[0])
            return FAIL, items, {"i": i, "atom": k, "law": "reflexive"}, ""
        if not np.array_equal(M, M.T):
            a, b = np.argwhere(M != M.T)[0]
            return FAIL, items, {"i": i, "atom": int(a), "other": int(b), "law": "symmetric"}, ""
        # transitive iff related rows coincide
        rows = np.unique(M, axis=0)
        if rows.sum() != H:
            return FAIL, items, {"i": i, "atom": int(np.flatnonzero(rows.sum(axis=0) > 1)[0]),
                                 "law": "transitive"}, ""
    return PASS, items, None, ""


def check_lemma_suite(s: AtomStructure, budget: int = LEMMA_BUDGET) -> list:
    """Validity, closure under coordinate bijections and the swap-relation laws."""
    names = [
        ("atoms.valid", "atom-case-split"),
        ("atoms.bijection-closure", "bijection-image-is-atom"),
        ("swap.identity", "swap-ii-is-equality"),
        ("swap.symmetric", "swap-ij-equals-swap-ji"),
        ("swap.functional", "swap-ij-functional"),
        ("swap.cyl-witness", "cyl-i-via-cyl-j-and-swap"),
        ("swap.image", "swap-image-is-whole-structure"),
        ("swap.transposition", "swap-equals-transposition-action"),
        ("cyl.equivalence", "cyl-i-equivalence"),
    ]
    if len(s) > budget:
        why = f"atoms={len(s)} exceeds lemma budget {budget}"
        return [CheckReport(cid, anc, SKIP, details=why) for cid, anc in names]
    rel = DefinitionalRelations(s)
    reports = [_timed(*names[0], _validity, s),
               _timed(*names[1], _bijection_closure, s, rel)]
    t0 = time.perf_counter()
    pairs = _all_swap_pairs(s, rel)
    pair_time = time.perf_counter() - t0
    reports += [
        _timed(*names[2], _swap_identity, s, pairs),
        _timed(*names[3], _swap_symmetric, s, pairs),
        _timed(*names[4], _swap_functional, s, pairs),
        _timed(*names[5], _cyl_swap_witness, s, rel, pairs),
        _timed(*names[6], _swap_image, s, pairs),
        _timed(*names[7], _swap_is_transposition, s, pairs),
        _timed(*names[8], _cyl_equivalence, s, rel),
    ]
    for r in reports[2:8]:
        r.elapsed += pair_time / 6
    return reports


# ---------------------------------------------------------------------------
# axiom suites


def _instance_name(eq, mapping):
    tag = "".join(f"{k}{v}" for k, v in sorted(mapping.items()))
    return f"{eq.label or 'eq'}.{tag}" if tag else (eq.label or "eq")


def check_axiom_suite(a: ComplexAlgebra, suite="qea", strat: Strategy = Strategy()) -> list:
    """One report per ground instance; random streams are keyed by instance position."""
    schemata = load_suite(suite)
    name = suite if isinstance(suite, str) else "file"
    reports = []
    for stream, (eq, mapping, ground) in enumerate(expand_suite(schemata, a.n)):
        t0 = time.perf_counter()
        res = check_equation(ground, a, strat, stream)
        how = f"exhaustive={res.checked}" if strat.mode == "exhaustive" else \
            f"samples={res.checked} seed={strat.seed}"
        cex = None
        if not res.passed:
            cex = dict(res.counterexample, equation=str(ground))
        anchor = _ANCHORS.get((eq.label or "?")[0], "equation")
        reports.append(CheckReport(f"axiom.{name}.{_instance_name(eq, mapping)}", anchor,
                                   PASS if res.passed else FAIL, cex, res.checked,
                                   time.perf_counter() - t0, how))
    return reports


# ---------------------------------------------------------------------------
# structural claims


def _probes(H, rng):
    if H <= EXHAUSTIVE_PROBES:
        return np.arange(H), "probes=all"
    return np.sort(rng.choice(H, size=SAMPLED_PROBES, replace=False)), f"probes={SAMPLED_PROBES} sampled"


def _additivity(a, rng):
    """``f(x) = join of f({b}) over b in x`` for every operator."""
    H = a.size
    if H == 0:
        return PASS, 0, None, ""
    small = H <= EXHAUSTIVE_PROBES
    xs = random_elements(rng, 4, H)
    if not small:
        # keep supports small enough to expand into singletons
        xs = np.zeros((4, H), dtype=bool)
        for r in range(4):
            xs[r, rng.choice(H, size=32, replace=False)] = True
    items = 0
    for name, f in a.operators():
        for x in xs:
            members = np.flatnonzero(x)
            joined = np.zeros(H, dtype=bool)
            for start in range(0, len(members), 512):
                block = members[start:start + 512]
                rows = np.zeros((len(block), H), dtype=bool)
                rows[np.arange(len(block)), block] = True
                joined |= f(rows).any(axis=0)
            items += len(members)
            direct = f(x)
            bad = np.flatnonzero(direct != joined)
            if len(bad):
                return FAIL, items, {"op": name, "x": members.tolist(), "atom": int(bad[0])}, ""
        zero = f(np.zeros(H, dtype=bool))
        if zero.any():
            return FAIL, items, {"op": name, "x": [], "atom": int(np.flatnonzero(zero)[0])}, ""
    return PASS, items, None, "dense" if small else "sparse"


def _simplicity(a):
    bad = is_simple_witness(a)
    if bad is not None:
        return FAIL, a.size, {"atom": bad}, ""
    return PASS, a.size, None, f"chain=c0..c{a.n - 1}"


def _atom_meet(a):
    """``prod_i c_i {b} = {b}`` for every atom ``b``."""
    H = a.size
    if H <= EXHAUSTIVE_PROBES:
        for start in range(0, H, 512):
            block = np.arange(start, min(H, start + 512))
            rows = np.zeros((len(block), H), dtype=bool)
            rows[np.arange(len(block)), block] = True
            meet = np.ones_like(rows)
            for i in range(a.n):
                meet &= a.cyl_bits(i, rows)
            bad = np.flatnonzero(np.any(meet != rows, axis=1))
            if len(bad):
                b = int(block[bad[0]])
                return FAIL, H, {"atom": b, "meet": np.flatnonzero(meet[bad[0]]).tolist()}, "literal"
        return PASS, H, None, "literal"
    ids = np.stack([a.cyl_classes(i) for i in range(a.n)], axis=1)
    _, inverse, counts = np.unique(ids, axis=0, return_inverse=True, return_counts=True)
    shared = np.flatnonzero(counts[inverse.ravel()] > 1)
    if len(shared):
        b = int(shared[0])
        return FAIL, H, {"atom": b, "meet": np.flatnonzero(
            np.all(ids == ids[b], axis=1)).tolist()}, "class tuples"
    return PASS, H, None, "class tuples"


def _frame_check(a, s, which, rng):
    probes, how = _probes(a.size, rng)
    f = atom_frame(a) if which == "atoms" else ultrafilter_frame(a)
    diff = compare_frames(f, structure_frame(s), probes)
    names = sum(len(x) for x in f.relation_names())
    if diff is not None:
        rel, p1, p0 = diff
        return FAIL, names, {"relation": rel, "probe": p1, "point": p0}, how
    return PASS, names * len(probes), None, how


def _decomposition(a):
    """``s_kl x`` rewritten through replacements for every ``mu``-closed ``x``.

    With ``mu`` distinct from ``k`` and ``l``:
    ``s_kl x = s^mu_l s^l_k s^k_mu c_mu x``; with ``mu`` equal to one of them,
    ``s_kl x = s^other_mu x``. ``x`` ranges over ``c_mu {b}`` for one atom of
    each ``==_mu`` class, which covers every atom whose singleton is already
    ``mu``-closed.
    """
    H, n = a.size, a.n
    if H == 0:
        return PASS, 0, None, ""
    items = 0
    for mu in range(n):
        ids = a.cyl_classes(mu)
        reps = np.unique(ids, return_index=True)[1]
        for start in range(0, len(reps), 256):
            block = reps[start:start + 256]
            X = ids[None, :] == ids[block][:, None]
            for k, l in itertools.permutations(range(n), 2):
                lhs = a.swap_bits(k, l, X)
                if mu in (k, l):
                    other = l if mu == k else k
                    rhs = a.repl_bits(other, mu, X)
                else:
                    rhs = a.repl_bits(mu, l, a.repl_bits(l, k, a.repl_bits(k, mu, a.cyl_bits(mu, X))))
                items += len(block)
                bad = np.flatnonzero(np.any(lhs != rhs, axis=1))
                if len(bad):
                    return FAIL, items, {"mu": mu, "k": k, "l": l, "class_of": int(block[bad[0]])}, ""
    return PASS, items, None, "tuples=(class,k,l,mu)"


def _reduct_coherence(a, s, rng):
    """Each reduct keeps the atoms, and its algebra's operators match the full algebra's."""
    probes, how = _probes(a.size, rng)
    if a.size > EXHAUSTIVE_PROBES:
        probes, how = probes[:32], "probes=32 sampled"
    full = dict(a.operators())
    rows = np.zeros((len(probes), a.size), dtype=bool)
    rows[np.arange(len(probes)), probes] = True
    cache = {}
    items = 0
    for sig in Signature:
        if sig == s.signature or not sig.is_reduct_of(s.signature):
            continue
        r = reduct(s, sig)
        if not (np.array_equal(r.rgs, s.rgs) and np.array_equal(r.kcode, s.kcode)):
            return FAIL, items, {"signature": sig.value, "reason": "carrier changed"}, how
        ra = ComplexAlgebra(r)
        for name, f in ra.operators():
            if name not in full:
                return FAIL, items, {"signature": sig.value, "operator": name,
                                     "reason": "not in the full signature"}, how
            items += len(probes)
            if name not in cache:
                cache[name] = full[name](rows)
            bad = np.flatnonzero(np.any(f(rows) != cache[name], axis=1))
            if len(bad):
                return FAIL, items, {"signature": sig.value, "operator": name,
                                     "atom": int(probes[bad[0]])}, how
        for name, bits in ra.constants():
            if not np.array_equal(bits, a.diag_bits(int(name[1]), int(name[2]))):
                return FAIL, items, {"signature": sig.value, "constant": name}, how
        if ("cyl" in sig.families) != any(n.startswith("c") for n, _ in ra.operators()):
            return FAIL, items, {"signature": sig.value, "reason": "cylindrifications missing"}, how
    return PASS, items, None, how


def check_structural(a: ComplexAlgebra, seed: int = 0) -> list:
    """Additivity first, since simplicity is certified on atoms only."""
    s = a.structure
    rng = lambda k: np.random.default_rng([seed, k])  # noqa: E731
    reports = [_timed("algebra.additivity", "operators-completely-additive", _additivity, a, rng(0))]
    if "cyl" in s.signature.families:
        reports += [
            _timed("algebra.simple", "cylinder-chain-reaches-top", _simplicity, a),
            _timed("algebra.atom-meet", "meet-of-cylinders-is-atom", _atom_meet, a),
        ]
    reports += [
        _timed("frame.atoms", "atoms-of-complex-algebra", _frame_check, a, s, "atoms", rng(1)),
        _timed("frame.ultrafilters", "ultrafilter-frame", _frame_check, a, s, "ultra", rng(2)),
    ]
    if {"cyl", "repl", "swap"} <= s.signature.families and "diag" in s.signature.families:
        reports.append(_timed("algebra.swap-decomposition", "swap-through-replacements",
                              _decomposition, a))
    reports.append(_timed("structure.reduct-coherence", "reducts-share-definitions",
                          _reduct_coherence, a, s, rng(3)))
    return reports


# ---------------------------------------------------------------------------
# whole runs


def report_for_structure(s: AtomStructure, strat: Strategy = Strategy(), suite="qea",
                         budget: int = LEMMA_BUDGET) -> tuple:
    reports = check_lemma_suite(s, budget)
    a = ComplexAlgebra(s)
    reports += check_axiom_suite(a, suite, strat)
    reports += check_structural(a, strat.seed)
    return reports, exit_status(reports)


def full_report(g: Graph, n: int = 3, rule=CopyRule.TRANSPARENT,
                strat: Strategy = Strategy(), budget: int = LEMMA_BUDGET) -> tuple:
    """Build the structure over ``g`` and run every suite; returns ``(reports, status)``."""
    return report_for_structure(build_eta(g, n, CopyRule(rule)), strat, "qea", budget)


def exit_status(reports) -> int:
    return 1 if any(r.failed for r in reports) else 0


def format_reports(reports) -> str:
    return "".join(r.line() + "\n" for r in reports)


def reports_json(reports) -> str:
    rows = []
    for r in reports:
        d = asdict(r)
        d.pop("elapsed")
        rows.append(d)
    return json.dumps(rows, indent=1, sort_keys=True)

"""Exhaustive frame/model enumeration and bounded countermodel search.

Every finite transitive relation decomposes into clusters (mutual-reachability
classes: reflexive sets of mutually related nodes, or irreflexive singletons)
arranged along a strict partial order.  Frames are therefore generated as a
quotient structure (a strict order, or a rooted tree for the tree-with-cluster
classes) decorated with cluster sizes and reflexivity flags.  Quotients are
enumerated in a "naturally labeled" form (node indices are a linear
extension), which covers every isomorphism class; duplicate isomorphic frames
are permitted, exact duplicates are removed.

Enumeration order is canonical: node count, then adjacency bitmask, then
valuation bitmask (sorted atoms, first atom in the least significant bits).
The numpy path evaluates a whole valuation block per frame at once and agrees
with the naive enumeration order, so "first countermodel" is well defined.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Sequence

import numpy as np

from .budget import Budget
from .formulas import And, Atom, Bot, Box, Formula, Imp, Neg, Or, Top, atoms as formula_atoms
from .kripke import BOT_KEY, FrameClass, KripkeModel

_CHUNK = 1 << 18


@dataclass(frozen=True)
class _Frame:
    n: int
    rel: frozenset[tuple[int, int]]
    clusters: tuple[tuple[int, ...], ...]
    succ_masks: tuple[int, ...]
    bitmask: int


def _make_frame(n: int, rel: frozenset[tuple[int, int]]) -> _Frame:
    succ = [0] * n
    for a, b in rel:
        succ[a] |= 1 << b
    clusters = []
    done = set()
    for k in range(n):
        if k in done:
            continue
        c = tuple(sorted({k} | {m for m in range(n) if (k, m) in rel and (m, k) in rel}))
        clusters.append(c)
        done.update(c)
    bitmask = sum(1 << (a * n + b) for a, b in rel)
    return _Frame(n, rel, tuple(clusters), tuple(succ), bitmask)


def _down_closed_subsets(i: int, downs: list[int]) -> Iterator[int]:
    # subsets of {0..i-1}, as bitmasks, closed under the existing down-sets
    for mask in range(1 << i):
        ok = True
        m = mask
        while m:
            x = (m & -m).bit_length() - 1
            if downs[x] & ~mask:
                ok = False
                break
            m &= m - 1
        if ok:
            yield mask


def _strict_orders(m: int) -> list[frozenset[tuple[int, int]]]:
    """All strict partial orders on range(m) for which 0..m-1 is a linear extension."""
    out: list[frozenset[tuple[int, int]]] = []

    def rec(i: int, downs: list[int]):
        if i == m:
            rel = frozenset((x, j) for j in range(m) for x in range(j) if downs[j] >> x & 1)
            out.append(rel)
            return
        for mask in _down_closed_subsets(i, downs):
            rec(i + 1, downs + [mask])

    rec(0, [])
    return out


def _tree_canon(parents: tuple[int, ...]) -> tuple:
    kids: dict[int, list[int]] = {i: [] for i in range(len(parents))}
    for i, par in enumerate(parents):
        if par >= 0:
            kids[par].append(i)

    def canon(i: int) -> tuple:
        return tuple(sorted(canon(c) for c in kids[i]))

    return canon(0)


def _rooted_trees(m: int) -> list[tuple[int, ...]]:
    """One parent array per unlabeled rooted tree on m nodes (root index 0)."""
    seen = {}
    for parents in itertools.product(*(range(i) for i in range(1, m))):
        arr = (-1,) + parents
        key = _tree_canon(arr)
        if key not in seen:
            seen[key] = arr
    return list(seen.values()) if m > 1 else [(-1,)]


def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    if parts == 1:
        yield (total,)
        return
    for first in range(1, total - parts + 2):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def _class_params(frame_class: FrameClass) -> tuple[str, str, bool]:
    """(quotient kind, cluster kind, serial) for a frame class."""
    kind = frame_class.kind
    if kind == "K4":
        return "tree", "mixed", False
    if kind == "KD4":
        return "tree", "mixed", True
    if kind == "S4":
        return "tree", "reflexive", False
    if kind == "GL":
        return "order", "irreflexive", False
    if kind == "Int":
        flavor = frame_class.flavor
        if flavor == "BPC":
            return "order", "mixed", False
        if flavor == "FPL":
            return "order", "irreflexive", False
        if flavor in ("IPC", "MPC"):
            return "order", "reflexive", False
        if flavor == "CPC":
            return "order", "reflexive", False  # restricted to n == 1 below
    raise ValueError(f"unknown frame class {frame_class!r}")


def _quotients(quotient_kind: str, m: int) -> list[frozenset[tuple[int, int]]]:
    if quotient_kind == "order":
        return _strict_orders(m)
    rels = []
    for parents in _rooted_trees(m):
        rel = set()
        for j in range(m):
            a = parents[j]
            while a >= 0:
                rel.add((a, j))
                a = parents[a]
        rels.append(frozenset(rel))
    return rels


@lru_cache(maxsize=None)
def frames_of_size(frame_class: FrameClass, n: int) -> tuple[_Frame, ...]:
    """All frames of the class with exactly n nodes, sorted by adjacency bitmask."""
    quotient_kind, cluster_kind, serial = _class_params(frame_class)
    if frame_class.kind == "Int" and frame_class.flavor == "CPC":
        if n != 1:
            return ()
        return (_make_frame(1, frozenset([(0, 0)])),)
    found: dict[int, _Frame] = {}
    for m in range(1, n + 1):
        if cluster_kind == "irreflexive" and m != n:
            continue
        for quot in _quotients(quotient_kind, m):
            succ_slots = {a for a, _ in quot}
            for sizes in _compositions(n, m):
                flag_choices = []
                for i, s in enumerate(sizes):
                    if cluster_kind == "reflexive" or s > 1:
                        flag_choices.append((True,))
                    elif cluster_kind == "irreflexive":
                        flag_choices.append((False,))
                    elif serial and i not in succ_slots:
                        flag_choices.append((True,))
                    else:
                        flag_choices.append((False, True))
                for flags in itertools.product(*flag_choices):
                    offsets = [0]
                    for s in sizes:
                        offsets.append(offsets[-1] + s)
                    members = [range(offsets[i], offsets[i + 1]) for i in range(m)]
                    rel = set()
                    for i in range(m):
                        if flags[i]:
                            rel.update((x, y) for x in members[i] for y in members[i])
                    for a, b in quot:
                        rel.update((x, y) for x in members[a] for y in members[b])
                    fr = _make_frame(n, frozenset(rel))
                    found.setdefault(fr.bitmask, fr)
    return tuple(sorted(found.values(), key=lambda fr: fr.bitmask))


@lru_cache(maxsize=None)
def rooted_frames_of_size(frame_class: FrameClass, n: int) -> tuple[_Frame, ...]:
    """Frames with a node seeing every other node.

    Any refutation lives inside the refuting node's generated submodel, which
    is rooted and no larger, so validity sweeps may skip rootless frames.
    """
    full = (1 << n) - 1
    return tuple(
        fr
        for fr in frames_of_size(frame_class, n)
        if any(fr.succ_masks[i] | (1 << i) == full for i in range(n))
    )


def _node_name(i: int) -> str:
    return f"k{i}"


def _persistent(frame_class: FrameClass) -> bool:
    return frame_class.kind == "Int"


def _allowed_masks(frame: _Frame, persistent: bool) -> list[int]:
    if not persistent:
        return list(range(1 << frame.n))
    out = []
    for mask in range(1 << frame.n):
        ok = True
        m = mask
        while m:
            k = (m & -m).bit_length() - 1
            if frame.succ_masks[k] & ~mask:
                ok = False
                break
            m &= m - 1
        if ok:
            out.append(mask)
    return out


def frame_model(frame: _Frame, masks: dict[str, int], frame_class: FrameClass) -> KripkeModel:
    nodes = tuple(_node_name(i) for i in range(frame.n))
    relation = frozenset((_node_name(a), _node_name(b)) for a, b in frame.rel)
    valuation = {
        atom: frozenset(_node_name(i) for i in range(frame.n) if mask >> i & 1)
        for atom, mask in masks.items()
    }
    clusters = None
    if frame_class.kind in ("K4", "KD4", "S4"):
        clusters = tuple(frozenset(_node_name(i) for i in c) for c in frame.clusters)
    return KripkeModel(nodes, relation, valuation, clusters)


def enumerate_models(max_nodes: int, frame_class: FrameClass, atom_set: Sequence[str]) -> Iterator[KripkeModel]:
    """Stream all models of the class with <= max_nodes nodes, canonical order.

    Exhaustive up to isomorphism-insensitive duplication; for Int classes only
    persistent valuations are produced.
    """
    if max_nodes < 1:
        raise ValueError("max_nodes must be >= 1")
    names = sorted(set(atom_set))
    persistent = _persistent(frame_class)
    for n in range(1, max_nodes + 1):
        for frame in frames_of_size(frame_class, n):
            allowed = _allowed_masks(frame, persistent)
            if not names:
                yield frame_model(frame, {}, frame_class)
                continue
            # first atom occupies the least significant bits of the combined
            # valuation index, so it varies fastest
            for combo in itertools.product(allowed, repeat=len(names)):
                masks = {names[len(names) - 1 - i]: combo[i] for i in range(len(names))}
                yield frame_model(frame, masks, frame_class)


_DTYPE = np.uint16


class CompiledFormulas:
    """Linearized subformula DAG, evaluated per frame over a valuation block.

    Each slot holds the truth of one subformula as a node-bitmask array over
    all valuations in the block.  flavor None means classical/modal forcing;
    a flavor string selects the persistent propositional clauses (Imp
    quantifies over successors, bot reads the BOT_KEY atom under MPC).
    """

    def __init__(self, formulas: Sequence[Formula], flavor: str | None):
        self.flavor = flavor
        self.ops: list[tuple] = []
        self._slot: dict[Formula, int] = {}
        self.roots = [self._compile(f) for f in formulas]

    def _emit(self, f: Formula, op: tuple) -> int:
        self.ops.append(op)
        idx = len(self.ops) - 1
        self._slot[f] = idx
        return idx

    def _compile(self, f: Formula) -> int:
        idx = self._slot.get(f)
        if idx is not None:
            return idx
        match f:
            case Atom(name):
                return self._emit(f, ("atom", name))
            case Bot():
                if self.flavor == "MPC":
                    return self._emit(f, ("atom", BOT_KEY))
                return self._emit(f, ("bot",))
            case Top():
                return self._emit(f, ("top",))
            case And(l, r):
                return self._emit(f, ("and", self._compile(l), self._compile(r)))
            case Or(l, r):
                return self._emit(f, ("or", self._compile(l), self._compile(r)))
            case Neg(sub):
                if self.flavor is None:
                    return self._emit(f, ("neg", self._compile(sub)))
                return self._emit(f, ("iimp", self._compile(sub), self._compile(Bot())))
            case Imp(l, r):
                code = "imp" if self.flavor is None else "iimp"
                return self._emit(f, (code, self._compile(l), self._compile(r)))
            case Box(sub):
                if self.flavor is not None:
                    raise TypeError("box is not part of the propositional language")
                return self._emit(f, ("box", self._compile(sub)))
        raise TypeError(f"not a formula: {f!r}")

    def run(self, atom_arrays: dict[str, np.ndarray], frame: "_Frame", length: int) -> list[np.ndarray]:
        full = _DTYPE((1 << frame.n) - 1)
        zeros = np.zeros(length, dtype=_DTYPE)
        succ = frame.succ_masks
        vals: list[np.ndarray] = []
        for op in self.ops:
            code = op[0]
            if code == "atom":
                v = atom_arrays.get(op[1], zeros)
            elif code == "bot":
                v = zeros
            elif code == "top":
                v = np.full(length, full, dtype=_DTYPE)
            elif code == "and":
                v = vals[op[1]] & vals[op[2]]
            elif code == "or":
                v = vals[op[1]] | vals[op[2]]
            elif code == "neg":
                v = full & ~vals[op[1]]
            elif code == "imp":
                v = (full & ~vals[op[1]]) | vals[op[2]]
            elif code == "iimp":
                bad = vals[op[1]] & ~vals[op[2]]
                v = zeros.copy()
                for i, sm in enumerate(succ):
                    if sm == 0:
                        v |= _DTYPE(1 << i)
                    else:
                        v |= ((bad & sm) == 0).astype(_DTYPE) << i
            else:  # box
                sv = vals[op[1]]
                v = zeros.copy()
                for i, sm in enumerate(succ):
                    if sm == 0:
                        v |= _DTYPE(1 << i)
                    else:
                        v |= ((sv & sm) == sm).astype(_DTYPE) << i
            vals.append(v)
        return [vals[r] for r in self.roots]


def _chunk_atom_arrays(
    names: list[str], allowed: np.ndarray, start: int, stop: int
) -> dict[str, np.ndarray]:
    idx = np.arange(start, stop, dtype=np.int64)
    base = len(allowed)
    out = {}
    for i, name in enumerate(names):
        digits = (idx // (base**i)) % base
        out[name] = allowed[digits].astype(_DTYPE)
    return out


def _scan_frames(
    frame_class: FrameClass, max_nodes: int, names: list[str], budget: Budget | None,
    rooted: bool = False,
):
    """Yield (frame, chunk_start, atom_arrays, length) blocks in canonical order."""
    persistent = _persistent(frame_class)
    source = rooted_frames_of_size if rooted else frames_of_size
    for n in range(1, max_nodes + 1):
        for frame in source(frame_class, n):
            allowed = np.array(_allowed_masks(frame, persistent), dtype=np.int64)
            total = len(allowed) ** len(names) if names else 1
            for start in range(0, total, _CHUNK):
                stop = min(start + _CHUNK, total)
                if budget is not None:
                    budget.spend_models(stop - start)
                arrays = _chunk_atom_arrays(names, allowed, start, stop)
                yield frame, start, arrays, stop - start


def _witness_from_block(
    frame: _Frame,
    frame_class: FrameClass,
    names: list[str],
    arrays: dict[str, np.ndarray],
    res: np.ndarray,
) -> tuple[KripkeModel, str] | None:
    full = (1 << frame.n) - 1
    bad = np.nonzero(res != full)[0]
    if not bad.size:
        return None
    v = int(bad[0])
    masks = {name: int(arrays[name][v]) for name in names}
    node_bits = int(res[v])
    node = next(i for i in range(frame.n) if not node_bits >> i & 1)
    return frame_model(frame, masks, frame_class), _node_name(node)


def _names_for(formulas: Sequence[Formula], frame_class: FrameClass) -> tuple[list[str], str | None]:
    flavor = frame_class.flavor if frame_class.kind == "Int" else None
    names: set[str] = set()
    for f in formulas:
        names |= formula_atoms(f)
    if flavor == "MPC":
        names.add(BOT_KEY)
    return sorted(names), flavor


def find_countermodel(
    f: Formula,
    frame_class: FrameClass,
    max_nodes: int,
    budget: Budget | None = None,
    extra_atoms: Sequence[str] = (),
) -> tuple[KripkeModel, str] | None:
    """First enumerated model and node refuting f, or None if none within bound.

    Hits are re-verified through the naive forcing checker before being
    returned, keeping the vectorized evaluator honest.
    """
    from .kripke import check, check_int

    names, flavor = _names_for([f], frame_class)
    names = sorted(set(names) | set(extra_atoms))
    prog = CompiledFormulas([f], flavor)
    for frame, _start, arrays, length in _scan_frames(frame_class, max_nodes, names, budget):
        (res,) = prog.run(arrays, frame, length)
        hit = _witness_from_block(frame, frame_class, names, arrays, res)
        if hit is not None:
            model, node = hit
            if flavor is None:
                assert not check(model, node, f)
            else:
                assert not check_int(model, node, f, flavor)
            return hit
    return None


def sweep_refutations(
    formulas: Sequence[Formula],
    frame_class: FrameClass,
    max_nodes: int,
    budget: Budget | None = None,
) -> dict[Formula, tuple[KripkeModel, str] | None]:
    """Refutation status of many formulas over one shared enumeration pass.

    Returns, per formula, a verified refuting (model, node) or None if the
    formula holds at every node of every model within the bound.  The pass
    scans rooted frames only, which loses no refutations (any refuting node's
    generated submodel is rooted and no larger).
    """
    names, flavor = _names_for(formulas, frame_class)
    result: dict[Formula, tuple[KripkeModel, str] | None] = {f: None for f in formulas}
    pending = list(dict.fromkeys(formulas))
    if not pending:
        return result
    from .kripke import check, check_int

    prog = CompiledFormulas(pending, flavor)
    for frame, _start, arrays, length in _scan_frames(frame_class, max_nodes, names, budget,
                                                      rooted=True):
        roots = prog.run(arrays, frame, length)
        still = []
        for f, res in zip(pending, roots):
            hit = _witness_from_block(frame, frame_class, names, arrays, res)
            if hit is not None:
                model, node = hit
                if flavor is None:
                    assert not check(model, node, f)
                else:
                    assert not check_int(model, node, f, flavor)
                result[f] = hit
            else:
                still.append(f)
        if len(still) != len(pending):
            pending = still
            if not pending:
                break
            prog = CompiledFormulas(pending, flavor)
    return result


def valid_within_bound(f: Formula, frame_class: FrameClass, max_nodes: int, budget: Budget | None = None) -> bool:
    return find_countermodel(f, frame_class, max_nodes, budget) is None


def find_entailment_countermodel(
    gamma: Sequence[Formula],
    a: Formula,
    frame_class: FrameClass,
    max_nodes: int,
    budget: Budget | None = None,
) -> tuple[KripkeModel, str] | None:
    """First model and node forcing every member of gamma but not a.

    Needed for the persistent semantics, where 'gamma holds and a fails at a
    node' is not expressible as the failure of a single formula.
    """
    gamma = tuple(gamma)
    names, flavor = _names_for(gamma + (a,), frame_class)
    prog = CompiledFormulas(gamma + (a,), flavor)
    for frame, _start, arrays, length in _scan_frames(frame_class, max_nodes, names, budget):
        roots = prog.run(arrays, frame, length)
        av = roots[-1]
        full = _DTYPE((1 << frame.n) - 1)
        gv = np.full(length, full, dtype=_DTYPE)
        for gres in roots[:-1]:
            gv = gv & gres
        bad = gv & ~av & full
        hit = np.nonzero(bad)[0]
        if hit.size:
            v = int(hit[0])
            masks = {name: int(arrays[name][v]) for name in names}
            node_bits = int(bad[v])
            node = next(i for i in range(frame.n) if node_bits >> i & 1)
            return frame_model(frame, masks, frame_class), _node_name(node)
    return None

import itertools

import pytest

from provlab.budget import Budget, BudgetExhausted
from provlab.formulas import Atom, parse_modal, parse_prop
from provlab.frames import (
    enumerate_models,
    find_countermodel,
    frames_of_size,
    sweep_refutations,
    valid_within_bound,
)
from provlab.kripke import (
    GL_FRAME,
    K4_FRAME,
    KD4_FRAME,
    S4_FRAME,
    check,
    check_int,
    int_frame,
    validate_frame,
)

p = Atom("p")


# -- independent brute-force oracles ----------------------------------------

def brute_relations(n):
    pairs = [(a, b) for a in range(n) for b in range(n)]
    for bits in range(1 << len(pairs)):
        yield frozenset(pairs[i] for i in range(len(pairs)) if bits >> i & 1)


def is_transitive(rel):
    return all((a, d) in rel for (a, b) in rel for (c, d) in rel if b == c)


def is_irreflexive(rel, n):
    return all((k, k) not in rel for k in range(n))


def is_tree_with_clusters(rel, n):
    """Independent predicate for the K4 frame class on an integer relation."""
    if not is_transitive(rel):
        return False
    clusters = []
    done = set()
    for k in range(n):
        if k in done:
            continue
        c = frozenset({k} | {m for m in range(n) if (k, m) in rel and (m, k) in rel})
        clusters.append(c)
        done |= c
    for c in clusters:
        if len(c) == 1:
            continue
        if not all((x, y) in rel for x in c for y in c):
            return False
    idx = {k: i for i, c in enumerate(clusters) for k in c}
    q = {(idx[a], idx[b]) for (a, b) in rel if idx[a] != idx[b]}
    if any((j, i) in q for (i, j) in q):
        return False
    preds = {i: {j for j in range(len(clusters)) if (j, i) in q} for i in range(len(clusters))}
    roots = [i for i in preds if not preds[i]]
    if len(roots) != 1:
        return False
    for i, ps in preds.items():
        for a in ps:
            for b in ps:
                if a != b and (a, b) not in q and (b, a) not in q:
                    return False
    return True


def isomorphic_to_some(rel, n, frames):
    for perm in itertools.permutations(range(n)):
        mapped = frozenset((perm[a], perm[b]) for a, b in rel)
        if any(fr.n == n and fr.rel == mapped for fr in frames):
            return True
    return False


@pytest.mark.parametrize("n", [1, 2, 3])
def test_gl_frames_cover_all_strict_orders(n):
    frames = frames_of_size(GL_FRAME, n)
    expected = [rel for rel in brute_relations(n) if is_transitive(rel) and is_irreflexive(rel, n)]
    for rel in expected:
        assert isomorphic_to_some(rel, n, frames)
    for fr in frames:
        assert is_transitive(fr.rel) and is_irreflexive(fr.rel, n)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_k4_frames_cover_all_trees_with_clusters(n):
    frames = frames_of_size(K4_FRAME, n)
    expected = [rel for rel in brute_relations(n) if is_tree_with_clusters(rel, n)]
    for rel in expected:
        assert isomorphic_to_some(rel, n, frames)
    for fr in frames:
        assert is_tree_with_clusters(fr.rel, n)


def test_gl_frame_census_within_two_nodes():
    # one single-node frame plus, at two nodes, the isolated pair and the
    # single-edge frame; nothing else is irreflexive-transitive up to renaming
    assert len(frames_of_size(GL_FRAME, 1)) == 1
    assert len(frames_of_size(GL_FRAME, 2)) == 2
    assert len(frames_of_size(GL_FRAME, 1)) + len(frames_of_size(GL_FRAME, 2)) == 3


def test_gl_one_node_one_atom_models():
    models = list(enumerate_models(1, GL_FRAME, ["p"]))
    assert len(models) == 2
    valuations = {m.valuation["p"] for m in models}
    assert valuations == {frozenset(), frozenset({"k0"})}


def test_s4_one_node_no_atoms():
    models = list(enumerate_models(1, S4_FRAME, []))
    assert len(models) == 1
    assert models[0].relation == frozenset({("k0", "k0")})


def test_enumerated_models_validate():
    for cls in (K4_FRAME, KD4_FRAME, S4_FRAME, GL_FRAME, int_frame("IPC"), int_frame("BPC"), int_frame("FPL")):
        for m in enumerate_models(3, cls, ["p"]):
            assert validate_frame(m, cls) == [], (cls, m.to_json())


def test_enumeration_deterministic():
    a = [m.to_json() for m in enumerate_models(3, K4_FRAME, ["p"])]
    b = [m.to_json() for m in enumerate_models(3, K4_FRAME, ["p"])]
    assert a == b


def test_find_countermodel_box_p_imp_p():
    hit = find_countermodel(parse_modal("[]p -> p"), K4_FRAME, 1)
    assert hit is not None
    model, node = hit
    assert len(model.nodes) == 1
    assert validate_frame(model, K4_FRAME) == []
    assert check(model, node, parse_modal("[]p -> p")) is False


def test_find_countermodel_axiom4_absent():
    assert find_countermodel(parse_modal("[]p -> [][]p"), K4_FRAME, 4) is None


def test_find_countermodel_absent_for_s4_theorem():
    assert find_countermodel(parse_modal("~[](~[]p /\\ p)"), S4_FRAME, 4) is None


def test_find_countermodel_matches_naive_enumeration():
    f = parse_modal("[](p \\/ q) -> []p \\/ []q")
    hit = find_countermodel(f, K4_FRAME, 3)
    assert hit is not None
    model, node = hit
    for m in enumerate_models(3, K4_FRAME, sorted({"p", "q"})):
        refuters = [k for k in m.nodes if not check(m, k, f)]
        if refuters:
            assert m.to_json() == model.to_json()
            assert refuters[0] == node
            break
    else:
        pytest.fail("naive enumeration found no countermodel")


def test_find_countermodel_int_flavors():
    em = parse_prop("p \\/ ~p")
    hit = find_countermodel(em, int_frame("IPC"), 4)
    assert hit is not None
    model, node = hit
    assert check_int(model, node, em, "IPC") is False
    assert find_countermodel(em, int_frame("CPC"), 4) is None


def test_find_countermodel_mpc_bot():
    f = parse_prop("bot -> p")
    hit = find_countermodel(f, int_frame("MPC"), 2)
    assert hit is not None
    model, node = hit
    assert check_int(model, node, f, "MPC") is False
    assert find_countermodel(f, int_frame("IPC"), 3) is None


def test_frame_soundness_of_axioms():
    ax4 = parse_modal("[]p -> [][]p")
    axT = parse_modal("[]p -> p")
    loeb = parse_modal("[]([]p -> p) -> []p")
    assert valid_within_bound(ax4, K4_FRAME, 3)
    assert valid_within_bound(ax4, S4_FRAME, 3)
    assert valid_within_bound(axT, S4_FRAME, 3)
    assert valid_within_bound(loeb, GL_FRAME, 3)
    assert valid_within_bound(parse_modal("~[]bot"), KD4_FRAME, 3)


def test_sweep_matches_single_search():
    fs = [parse_modal(s) for s in ["[]p -> p", "[]p -> [][]p", "p -> []p", "[](p -> p)"]]
    swept = sweep_refutations(fs, K4_FRAME, 3)
    for f in fs:
        single = find_countermodel(f, K4_FRAME, 3)
        if single is None:
            assert swept[f] is None
        else:
            assert swept[f] is not None
            assert swept[f][0].to_json() == single[0].to_json()
            assert swept[f][1] == single[1]


def test_budget_exhaustion():
    b = Budget(models=10)
    with pytest.raises(BudgetExhausted):
        find_countermodel(parse_modal("[]p -> [][]p"), K4_FRAME, 4, budget=b)


def test_persistence_lifts_to_all_formulas_by_enumeration():
    fs = [parse_prop(s) for s in ("p -> q", "p \\/ q", "~p", "(p -> q) -> q")]
    for m in itertools.islice(enumerate_models(3, int_frame("IPC"), ["p", "q"]), 0, None, 7):
        for f in fs:
            for k, l in m.relation:
                if check_int(m, k, f, "IPC"):
                    assert check_int(m, l, f, "IPC")

"""Move engine tests: applicability, exact invariants, inversion, walks."""

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from knotwind import (
    Move,
    apply,
    invert,
    list_moves,
    parse,
    random_diagram,
    random_walk,
    serialize,
    split_seed,
)
from knotwind.errors import NotApplicableError
from knotwind.moves import (
    COMPOSITE,
    JCANCEL_ADD,
    JCANCEL_REMOVE,
    JSLIDE,
    M4PRIME,
    R1_ADD,
    R1_REMOVE,
    R2_ADD,
    R2_REMOVE,
    R3,
    REMOVE_KINDS,
    _sample_move,
    _scan_moves,
)

seeds = st.integers(min_value=0, max_value=10**9)

KINK = "genus 0\ncode O1+ U1+"


def walk_of(seed, steps=60, cap=36):
    d = random_diagram(split_seed(seed, 0))
    return random_walk(d, steps, seed=split_seed(seed, 1), size_cap=cap)


# -- kind-specific contracts ----------------------------------------------------


def test_m4prime_on_kink():
    t, corr = apply(parse(KINK), Move(M4PRIME, (1,)))
    assert serialize(t) == "genus 0\ncode J+ U1- J- O1-"
    assert corr.m4_target == 1
    # labels satisfy i + j = -1
    assert parse(KINK).crossing_label(1).raw + t.crossing_label(1).raw == -1


def test_m4prime_placement_is_the_unique_label_compatible_one():
    """Of the four ways to lay one jump pair around a changed passage, only
    wrapping the formerly-over passage as J+ ... J- (or the cyclically equal
    variant) satisfies i + j = -1."""
    before = parse(KINK).crossing_label(1).raw
    candidates = {
        "genus 0\ncode J+ U1- J- O1-": True,
        "genus 0\ncode J- U1- J+ O1-": False,
        "genus 0\ncode U1- J+ O1- J-": False,
        "genus 0\ncode U1- J- O1- J+": True,  # same cyclic word as the first
    }
    for text, works in candidates.items():
        d = parse(text)
        assert (before + d.crossing_label(1).raw == -1) is works


def test_r1_remove_kink():
    t, corr = apply(parse(KINK), Move(R1_REMOVE, (1,)))
    assert serialize(t) == "genus 0\ncode"
    assert corr.destroyed == {1}


def test_r1_remove_requires_clean_loop():
    d = parse("genus 1\ncode O1+ U1+\nmark 0 1 0\nmark 1 2 0")
    with pytest.raises(NotApplicableError):
        apply(d, Move(R1_REMOVE, (1,), {"loop_edge": 0}))
    # the other loop side is just as marked
    with pytest.raises(NotApplicableError):
        apply(d, Move(R1_REMOVE, (1,), {"loop_edge": 1}))


def test_r1_remove_merges_marks():
    d = parse("genus 1\ncode O1+ U1+ J+\nmark 1 1 0\nmark 2 0 2")
    t, _ = apply(d, Move(R1_REMOVE, (1,), {"loop_edge": 0}))
    assert serialize(t) == "genus 1\ncode J+\nmark 0 1 2"


def test_r1_remove_non_adjacent_rejected():
    d = parse("genus 0\ncode O1+ O2+ U1+ U2+")
    with pytest.raises(NotApplicableError):
        apply(d, Move(R1_REMOVE, (1,)))


def test_jcancel_remove():
    t, _ = apply(parse("genus 0\ncode J+ J-"), Move(JCANCEL_REMOVE, (0,)))
    assert serialize(t) == "genus 0\ncode"
    with pytest.raises(NotApplicableError):
        apply(parse("genus 0\ncode J+ J+"), Move(JCANCEL_REMOVE, (0,)))


def test_r2_remove_requires_opposite_signs():
    good = parse("genus 0\ncode O1+ O2- U2- U1+")
    t, corr = apply(good, Move(R2_REMOVE, (1, 2)))
    assert serialize(t) == "genus 0\ncode"
    assert corr.destroyed == {1, 2}
    bad = parse("genus 0\ncode O1+ O2+ U2+ U1+")
    with pytest.raises(NotApplicableError):
        apply(bad, Move(R2_REMOVE, (1, 2)))


def test_r2_remove_label_equality_checked_before_deletion():
    d = parse("genus 0\ncode O1+ O2- J+ U2- U1+ J-")
    assert d.crossing_label(1).raw == d.crossing_label(2).raw
    t, _ = apply(d, Move(R2_REMOVE, (1, 2)))
    assert serialize(t) == "genus 0\ncode J+ J-"


def test_r1_removable_label_is_zero_mod_degree():
    d = parse("genus 0\ncode O1+ U1+ J+ J+")
    lab = d.crossing_label(1)
    assert lab.reduced.is_zero
    d2 = parse("genus 0\ncode U1+ J+ J+ O1+")  # loop spans the wrap
    assert d2.crossing_label(1).reduced.is_zero


def test_r3_swap_and_roles():
    d = parse("genus 0\ncode O1+ O2+ J+ U1+ O3+ J+ U2+ U3+")
    sites = [m for m in list_moves(d) if m.kind == R3]
    assert sites == [Move(R3, (0, 3, 6))]
    t, corr = apply(d, sites[0])
    assert serialize(t) == "genus 0\ncode O2+ O1+ J+ O3+ U1+ J+ U3+ U2+"
    # the middle role v2 is the crossing between the top and bottom strands
    assert corr.r3_roles == (1, 2, 3)
    # the swap is an involution at the same sites
    back, _ = apply(t, Move(R3, (0, 3, 6)))
    assert back == d


def test_r3_preserves_all_crossing_labels():
    d = parse("genus 0\ncode O1+ O2+ J+ U1+ O3+ J+ U2+ U3+")
    t, _ = apply(d, Move(R3, (0, 3, 6)))
    for c in (1, 2, 3):
        assert d.half_curve_class(c).vector == t.half_curve_class(c).vector


def test_r3_alternating_sum_is_multiple_of_knot_class():
    d = parse("genus 0\ncode O1+ O2+ J+ U1+ O3+ J+ U2+ U3+")
    _, corr = apply(d, Move(R3, (0, 3, 6)))
    v1, v2, v3 = corr.r3_roles
    total = (
        d.crossing_label(v1).raw - d.crossing_label(v2).raw + d.crossing_label(v3).raw
    )
    assert total % d.degree() == 0


def test_r3_rejects_marked_sides():
    d = parse("genus 1\ncode O1+ O2+ J+ U1+ O3+ J+ U2+ U3+\nmark 0 1 0")
    with pytest.raises(NotApplicableError):
        apply(d, Move(R3, (0, 3, 6)))


def test_r3_rejects_wrong_role_pattern():
    # two mixed pairs instead of one
    d = parse("genus 0\ncode O1+ U2+ O2+ U3+ O3+ U1+")
    with pytest.raises(NotApplicableError):
        apply(d, Move(R3, (0, 2, 4)))


def test_jslide_forward_and_backward():
    d = parse("genus 0\ncode J+ O1+ J+ U1+")
    t, _ = apply(d, Move(JSLIDE, (1,), {"direction": "forward"}))
    assert serialize(t) == "genus 0\ncode O1+ J+ U1+ J+"
    back, _ = apply(t, Move(JSLIDE, (1,), {"direction": "backward"}))
    assert back == d
    assert d.crossing_label(1).raw == t.crossing_label(1).raw == 1


def test_jslide_requires_equal_directions():
    d = parse("genus 0\ncode J+ O1+ J- U1+")
    with pytest.raises(NotApplicableError):
        apply(d, Move(JSLIDE, (1,), {"direction": "forward"}))


def test_jslide_requires_clean_gap_edges():
    d = parse("genus 1\ncode J+ O1+ J+ U1+\nmark 0 1 0")
    with pytest.raises(NotApplicableError):
        apply(d, Move(JSLIDE, (1,), {"direction": "forward"}))


def test_r1_add_then_remove_identity():
    d = parse("genus 1\ncode J+ J-\nmark 0 3 1\nmark 1 -1 0")
    for edge in range(2):
        for sign in (1, -1):
            for chir in ("ou", "uo"):
                m = Move(R1_ADD, (edge,), {"sign": sign, "chirality": chir})
                t, corr = apply(d, m)
                assert t.knot_class() == d.knot_class()
                back, _ = apply(t, invert(m, corr))
                assert back == d


def test_r2_add_same_edge_poke():
    d = parse("genus 0\ncode J+")
    m = Move(R2_ADD, (0, 0), {"sign": 1, "under_order": "reversed"})
    t, corr = apply(d, m)
    assert serialize(t) == "genus 0\ncode J+ O1+ O2- U2- U1+"
    assert corr.created == {1, 2}
    back, _ = apply(t, invert(m, corr))
    assert back == d


def test_fresh_ids_do_not_collide():
    d = parse("genus 0\ncode O7+ U7+")
    t, corr = apply(d, Move(R1_ADD, (0,)))
    assert corr.created == {8}
    with pytest.raises(NotApplicableError):
        apply(d, Move(R1_ADD, (0,), {"id": 7}))


# -- enumeration ------------------------------------------------------------------


def test_list_moves_on_empty_diagram():
    kinds = {m.kind for m in list_moves(parse("genus 0\ncode"))}
    assert kinds == {R1_ADD, R2_ADD, JCANCEL_ADD}


def test_list_moves_counts_on_empty():
    moves = list_moves(parse("genus 0\ncode"))
    assert sum(1 for m in moves if m.kind == R1_ADD) == 4
    assert sum(1 for m in moves if m.kind == R2_ADD) == 4
    assert sum(1 for m in moves if m.kind == JCANCEL_ADD) == 2


def test_list_moves_detects_removals():
    assert any(m.kind == R1_REMOVE for m in list_moves(parse(KINK)))
    assert any(m.kind == JCANCEL_REMOVE for m in list_moves(parse("genus 0\ncode J+ J-")))
    d = parse("genus 0\ncode O1+ O2- U2- U1+")
    assert Move(R2_REMOVE, (1, 2)) in list_moves(d)


def test_kink_on_two_symbol_code_has_both_loops():
    moves = [m for m in list_moves(parse(KINK)) if m.kind == R1_REMOVE]
    assert [m.params["loop_edge"] for m in moves] == [0, 1]


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_listed_moves_all_apply(seed):
    d = random_diagram(seed, max_crossings=6, max_jumps=4)
    for m in list_moves(d):
        t, corr = apply(d, m)
        assert t.degree() == d.degree()
        assert t.knot_class() == d.knot_class()
        assert set(corr.surviving) | set(corr.destroyed) == set(d.crossings())
        assert set(corr.surviving.values()) | set(corr.created) == set(t.crossings())


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_sampler_agrees_with_list_moves(seed):
    d = random_diagram(seed, max_crossings=4, max_jumps=3)
    listed = list_moves(d)
    rng = random.Random(seed)
    for _ in range(30):
        assert _sample_move(d, rng, size_cap=100) in listed


def test_sampler_prefers_removals_over_cap():
    d = parse("genus 0\ncode O1+ U1+ J+ J- O2+ U2+")
    rng = random.Random(3)
    for _ in range(20):
        m = _sample_move(d, rng, size_cap=2)
        assert m.kind in REMOVE_KINDS


# -- inversion -------------------------------------------------------------------


def test_invert_is_exact_on_walks():
    for i in range(12):
        w = walk_of(seed=200 + i, steps=50)
        for step in w.steps:
            inv = invert(step.move, step.correspondence)
            back, _ = apply(step.result, inv)
            assert back == step.correspondence.source


def test_invert_m4prime_is_composite():
    d = parse(KINK)
    m = Move(M4PRIME, (1,))
    t, corr = apply(d, m)
    inv = invert(m, corr)
    assert inv.kind == COMPOSITE
    kinds = [sub["kind"] for sub in inv.params["moves"]]
    assert kinds == [M4PRIME, JSLIDE, JCANCEL_REMOVE, JCANCEL_REMOVE]
    back, back_corr = apply(t, inv)
    assert back == d
    assert back_corr.m4_target == 1
    # inverting the inverse lands on the m4 result again
    again, _ = apply(back, invert(inv, back_corr))
    assert again == t


def test_invert_r3_is_itself():
    d = parse("genus 0\ncode O1+ O2+ J+ U1+ O3+ J+ U2+ U3+")
    m = Move(R3, (0, 3, 6))
    t, corr = apply(d, m)
    assert invert(m, corr) == m


def test_invert_wrapped_removals():
    # kink loop spanning the starting point, marked elsewhere
    d = parse("genus 1\ncode U1+ J+ O1+\nmark 0 0 3")
    m = Move(R1_REMOVE, (1,), {"loop_edge": 2})
    t, corr = apply(d, m)
    assert serialize(t) == "genus 1\ncode J+\nmark 0 0 3"
    back, _ = apply(t, invert(m, corr))
    assert back == d
    # jump pair spanning the starting point
    d2 = parse("genus 1\ncode J- O1+ U1+ J+\nmark 1 5 0")
    m2 = Move(JCANCEL_REMOVE, (3,))
    t2, corr2 = apply(d2, m2)
    back2, _ = apply(t2, invert(m2, corr2))
    assert back2 == d2


# -- random walks -----------------------------------------------------------------


def test_random_walk_zero_steps():
    d = parse("genus 0\ncode J+ J+")
    w = random_walk(d, 0, seed=1)
    assert w.start == d and w.steps == []
    assert w.diagrams() == [d]


def test_random_walk_deterministic():
    d = parse("genus 0\ncode J+ J+")
    a = random_walk(d, 80, seed=42, size_cap=30)
    b = random_walk(d, 80, seed=42, size_cap=30)
    assert [s.move for s in a.steps] == [s.move for s in b.steps]
    assert a.diagrams() == b.diagrams()
    c = random_walk(d, 80, seed=43, size_cap=30)
    assert [s.move for s in a.steps] != [s.move for s in c.steps]


def test_walk_preserves_degree_and_class():
    d = parse("genus 1\ncode J+ J+\nmark 0 1 -1")
    w = random_walk(d, 300, seed=9, size_cap=30)
    assert len(w.steps) == 300
    assert {x.degree() for x in w.diagrams()} == {2}
    assert {x.knot_class() for x in w.diagrams()} == {(1, -1, 2)}


def test_walk_respects_cap_loosely():
    d = parse("genus 0\ncode J+ J+")
    w = random_walk(d, 400, seed=3, size_cap=16)
    # insertions grow by at most 4 symbols past the cap before removals kick in
    assert max(len(x.code) for x in w.diagrams()) <= 20


def test_scan_moves_deterministic_order():
    d = random_diagram(7)
    assert _scan_moves(d) == _scan_moves(d)

"""Universal presentation construction and the factorization test."""

import pytest

from knotwind import (
    Hom,
    Move,
    MoveTrace,
    TraceStep,
    apply,
    build_universal,
    factor,
    parse,
    presentation_report,
    random_diagram,
    random_walk,
    resolve_parity,
    split_seed,
)
from knotwind.moves import M4PRIME, R1_REMOVE, R3
from knotwind.universal import InconsistencyWitness, Relation

KINK = "genus 0\ncode O1+ U1+"


def single_step_trace(text, move):
    d = parse(text)
    t, corr = apply(d, move)
    return MoveTrace(d, [TraceStep(move, corr, t)])


def test_r1_trace_presentation():
    tr = single_step_trace(KINK, Move(R1_REMOVE, (1,)))
    u = build_universal(tr)
    assert u.generators == ("1", (0, 1))
    assert [r.rtype for r in u.relations] == [5]
    assert u.group.describe() == "Z"
    assert u.classes[(0, 1)].is_zero
    assert not u.one_class.is_zero


def test_m4_trace_presentation():
    tr = single_step_trace(KINK, Move(M4PRIME, (1,)))
    u = build_universal(tr)
    assert u.generators == ("1", (0, 1), (1, 1))
    assert [r.rtype for r in u.relations] == [4]
    assert u.group.describe() == "Z^2"


def test_empty_trace_presentation():
    u = build_universal(MoveTrace(parse("genus 0\ncode")))
    assert u.generators == ("1",)
    assert u.relations == ()
    assert u.group.describe() == "Z"


def test_replay_stability():
    d = random_diagram(split_seed(17, 0))
    w = random_walk(d, 50, seed=split_seed(17, 1), size_cap=30)
    u1, u2 = build_universal(w), build_universal(w)
    assert u1.generators == u2.generators
    assert u1.relations == u2.relations
    assert u1.class_of == u2.class_of
    assert u1.group == u2.group


def test_factor_r1_trace_with_label_parity():
    tr = single_step_trace(KINK, Move(R1_REMOVE, (1,)))
    u = build_universal(tr)
    hom = factor(u, tr, "label")
    assert isinstance(hom, Hom)
    assert hom(u.one_class).rep == (-1,)
    assert hom(u.classes[(0, 1)]).is_zero


def test_factor_m4_trace_with_homological_parity():
    d = parse("genus 1\ncode O1+ U1+\nmark 1 1 0")
    move = Move(M4PRIME, (1,))
    t, corr = apply(d, move)
    tr = MoveTrace(d, [TraceStep(move, corr, t)])
    u = build_universal(tr)
    hom = factor(u, tr, "homological")
    assert isinstance(hom, Hom)
    fixed = resolve_parity("homological")(d).fixed
    assert hom(u.one_class) == fixed
    assert fixed == fixed.group.canonical((0, 0, -1))


def test_factor_all_parities_and_commuting_condition():
    for i in range(6):
        d = random_diagram(split_seed(23, i))
        w = random_walk(d, 50, seed=split_seed(23, 100 + i), size_cap=30)
        u = build_universal(w)
        for kind in ("label", "homological", "gauss"):
            hom = factor(u, w, kind)
            assert isinstance(hom, Hom), f"{kind}: {hom}"
            assignments = [resolve_parity(kind)(dd) for dd in w.diagrams()]
            for (di, c), cls in u.classes.items():
                assert hom(cls) == assignments[di].values[c]
            assert hom(u.one_class) == assignments[0].fixed


def test_factor_images_unique_across_two_passes():
    """The generator images determine the homomorphism: evaluating via the
    collapsed solve and via direct recomputation agree on every class."""
    d = random_diagram(split_seed(29, 0))
    w = random_walk(d, 40, seed=split_seed(29, 1), size_cap=30)
    u = build_universal(w)
    hom = factor(u, w, "label")
    assignments = [resolve_parity("label")(dd) for dd in w.diagrams()]
    direct = {gen: assignments[gen[0]].values[gen[1]] for gen in u.generators[1:]}
    for gen, cls in u.classes.items():
        assert hom(cls) == direct[gen]


def test_corrupted_relation_is_detected_and_named():
    # degree 3, so a sign-flipped triangle relation has a nonzero image
    d = parse("genus 0\ncode O1+ O2+ J+ U1+ O3+ J+ U2+ U3+ J+")
    move = Move(R3, (0, 3, 6))
    t, corr = apply(d, move)
    tr = MoveTrace(d, [TraceStep(move, corr, t)])
    # swap the middle role: the triangle relation gets the wrong sign pattern
    honest = corr.r3_roles
    corr.r3_roles = (honest[1], honest[0], honest[2])
    u = build_universal(tr)
    out = factor(u, tr, "label")
    assert isinstance(out, InconsistencyWitness)
    assert out.relation.rtype == 3
    assert out.relation.step == 0
    assert not out.image.is_zero
    assert "type 3" in str(out)
    # the honest roles do factor
    corr.r3_roles = honest
    assert isinstance(factor(build_universal(tr), tr, "label"), Hom)


def test_corrupted_equality_relation_is_detected():
    """A violated identification must be caught even though the group is
    built on the collapsed basis."""
    d = parse("genus 0\ncode O1+ U1+ J+ J+")
    move = Move(M4PRIME, (1,))
    t, corr = apply(d, move)
    tr = MoveTrace(d, [TraceStep(move, corr, t)])
    u = build_universal(tr)
    # forge a type-1 relation identifying the changed crossing across the move
    forged = Relation(1, 0, ((1, 1), (2, -1)))
    forged_u = type(u)(
        u.generators,
        u.relations + (forged,),
        u.group,
        u.class_of,
        u.classes,
        u.one_class,
    )
    out = factor(forged_u, tr, "label")
    assert isinstance(out, InconsistencyWitness)
    assert out.relation == forged


def test_presentation_report_shape():
    tr = single_step_trace(KINK, Move(R1_REMOVE, (1,)))
    u = build_universal(tr)
    report = presentation_report(u)
    assert report["group"] == "Z"
    assert report["relation_counts"]["5"] == 1
    assert report["classes"]["d0:c1"] == [0, 0]
    assert len(report["generators"]) == 2

import json

import pytest
from hypothesis import given, settings, strategies as st

from scatterjump import relations as rl
from scatterjump.order_trees import LEAF_Z, tree_canon, tree_iso
from scatterjump.relations import (AtomVal, FinSet, GroupMap, LassoSeq, LassoZ, SchemaError, SeqDefault,
                                   freeness, from_json, make_relation, point_to_ztree, rel_decide, to_json,
                                   ztree_to_point)

O, I = AtomVal(0), AtomVal(1)


def lz(mid, origin=0, pad=O):
    return LassoZ((pad,), tuple(mid), (pad,), origin)


def test_jump_delta2_shift():
    R = make_relation("jump(delta2,Z)")
    x, y = lz([I]), lz([I], 5)
    assert rel_decide(R, x, y)
    assert R.witness(x, y) == 5


def test_jump_delta2_singleton_vs_doubleton():
    R = make_relation("jump(delta2,Z)")
    assert not rel_decide(R, lz([I]), lz([I, I]))


def test_e0():
    R = make_relation("e0")
    assert rel_decide(R, LassoSeq((O, O), (I,)), LassoSeq((), (I,)))
    assert not rel_decide(R, LassoSeq((), (O, I)), LassoSeq((), (I, O)))


def test_fs_jump():
    R = make_relation("fs(delta3)")
    a, b = AtomVal(0), AtomVal(1)
    assert rel_decide(R, FinSet((a, b)), FinSet((b, a, a)))
    assert not rel_decide(R, FinSet((a,)), FinSet((a, b)))


def test_louveau_cofinite_agreement():
    R = make_relation("louveau(delta2)")
    x = SeqDefault(((2, I), (5, I)), O)
    y = SeqDefault((), O)
    assert rel_decide(R, x, y)


def test_jump_e0_persistent_alteration():
    R = make_relation("jump(e0,Z)")
    a, b = LassoSeq((), (O,)), LassoSeq((), (I,))
    x = LassoZ((a, a), (b,), (a, a), 0)
    y = LassoZ((a, b), (b,), (a, b), 3)
    assert not rel_decide(R, x, y)
    from scatterjump.oracles import brute_shift_equiv
    ids = lambda p: p.map(lambda c: R.inner.canon(c))
    assert brute_shift_equiv(ids(x), ids(y)) is None


def test_freeness_periodic():
    R = make_relation("jump(delta2,Z)")
    f = freeness(R, LassoZ((O, I), (), (O, I), 0))
    assert not f.free


def test_freeness_groupmap():
    R = make_relation("jump(delta2,Z2fin)")
    x = GroupMap(((frozenset(), O), (frozenset({1}), I)), AtomVal(0))
    f = freeness(R, x)
    assert f.free and not f.pairwise_inequivalent


def test_point_to_ztree_single():
    t = point_to_ztree(lz([I]), 1)
    assert [i for i in range(-6, 7) if t.at(i) is not None] == [0]
    assert t.at(0) == LEAF_Z


def test_point_to_ztree_all_ones():
    t = point_to_ztree(LassoZ((I,), (), (I,), 0), 1)
    assert all(t.at(i) == LEAF_Z for i in range(-6, 7))


def test_level2_round_trip():
    R = rl.iterate_jump(rl.Delta(2), rl.Z, 2)
    from scatterjump.acceptance import level2_points
    for x in level2_points()[:120]:
        assert rel_decide(R, ztree_to_point(point_to_ztree(x, 2), 2), x)


def test_json_round_trip():
    pts = [lz([I, O, I], 3), LassoSeq((0,), (1, 0)), FinSet((O, I)), SeqDefault(((1, I),), O),
           GroupMap(((frozenset({2}), I),), O)]
    for p in pts:
        assert from_json(json.loads(json.dumps(to_json(p)))) == p


@pytest.mark.parametrize("bad", ["jump(", "nope(e0)", "jump(e0,Q)"])
def test_bad_relation_spec(bad):
    with pytest.raises(SchemaError):
        make_relation(bad)


def test_bad_point():
    with pytest.raises(SchemaError):
        from_json({"mystery": 1})
    with pytest.raises(SchemaError):
        from_json(True)


cells = st.lists(st.sampled_from([O, I]), min_size=1, max_size=3)


@settings(max_examples=80, deadline=None)
@given(cells, st.lists(st.sampled_from([O, I]), max_size=3), cells, st.integers(-4, 4), st.integers(-6, 6))
def test_jump_is_shift_invariant(left, mid, right, origin, k):
    R = make_relation("jump(delta2,Z)")
    x = LassoZ(tuple(left), tuple(mid), tuple(right), origin)
    y = LassoZ(tuple(left), tuple(mid), tuple(right), origin + k)
    assert rel_decide(R, x, y)
    assert rel_decide(R, R.canon(x), x)
    assert tree_iso(point_to_ztree(x, 1), point_to_ztree(y, 1))
    assert tree_canon(point_to_ztree(x, 1)) == tree_canon(point_to_ztree(y, 1))

import json

import pytest

from scatterjump import order_terms as ot
from scatterjump.order_terms import ONE, Fin, OmegaRep, Sum, ZetaRep, parse_term
from scatterjump.order_trees import (LEAF, LEAF_Z, RegTree, TreeError, ZTree, decode_order,
                                     enumerate_regtrees, g_table, label_encode, lztree, order_to_tree,
                                     regtree_from_json, regtree_to_json, sot_to_ztree, tree_canon,
                                     tree_iso, tree_rank, tree_to_order, ztree, ztree_from_json,
                                     ztree_to_json, ztree_to_sot)


def node(children):
    return RegTree(children)


def test_tree_rank():
    assert tree_rank(LEAF) == 1
    assert tree_rank(node(OmegaRep(ot.Atom(LEAF)))) == 2
    two = node(OmegaRep(ot.Atom(LEAF)))
    assert tree_rank(node(Sum((ot.Atom(two), ot.Atom(LEAF))))) == 3


def test_ztree_canon_shift_invariant():
    assert tree_canon(ztree({0: LEAF_Z, 3: LEAF_Z})) == tree_canon(ztree({5: LEAF_Z, 8: LEAF_Z}))
    assert tree_canon(ztree({0: LEAF_Z, 1: LEAF_Z})) != tree_canon(ztree({0: LEAF_Z, 2: LEAF_Z}))


def test_regtree_absorption():
    a = node(Sum((ot.Atom(LEAF), OmegaRep(ot.Atom(LEAF)))))
    assert tree_iso(a, node(OmegaRep(ot.Atom(LEAF))))


# Points are leaves and the root is the single class of the last condensation,
# so tree_rank(order_to_tree(L)) == rank(L) + 1.

def test_order_to_tree_point():
    assert tree_iso(order_to_tree(ONE), LEAF)


def test_order_to_tree_omega():
    assert tree_iso(order_to_tree(OmegaRep(ONE)), node(OmegaRep(ot.Atom(LEAF))))


def test_order_to_tree_rank():
    from scatterjump.oracles import enumerate_terms
    for L in enumerate_terms(4):
        if not ot._is_empty(L):
            assert tree_rank(order_to_tree(L)) == ot.rank(L) + 1


def test_order_to_tree_zeta_point_zeta():
    T = order_to_tree(Sum((ZetaRep(ONE), ONE, ZetaRep(ONE))))
    zl = node(ZetaRep(ot.Atom(LEAF)))
    one = node(ot.Atom(LEAF))
    want = node(Sum((ot.Atom(zl), ot.Atom(one), ot.Atom(zl))))
    assert tree_iso(T, want)


def test_tree_to_order_leaf():
    assert ot.iso_terms(tree_to_order(LEAF), ONE).__class__ is ot.Isomorphic


def test_round_trip_small():
    for T in enumerate_regtrees(3, pool_cap=6):
        assert tree_iso(decode_order(tree_to_order(T)), T)


def test_complete_variant_is_complete():
    for T in enumerate_regtrees(3, pool_cap=6):
        L = tree_to_order(T, complete=True)
        assert ot.is_complete(L)


def test_sot_round_trip():
    trees = [T for T in enumerate_regtrees(4, pool_cap=6) if tree_rank(T) >= 3]
    assert trees
    for T in trees:
        assert tree_canon(ztree_to_sot(sot_to_ztree(T))) == tree_canon(T)


def test_sot_zeta_of_leaf_parents():
    parent = node(ot.Atom(LEAF))
    z = sot_to_ztree(node(ZetaRep(ot.Atom(parent))))
    assert isinstance(z, ZTree)
    assert tree_rank(z) == 2


def test_missing_child_is_trivial_tree():
    assert tree_iso(ztree_to_sot(LEAF_Z), LEAF)


def test_label_encode_single_node():
    z = label_encode(lztree("a"))
    positions = {i: z.at(i) for i in range(-5, 6) if z.at(i) is not None}
    assert set(positions) == {0} | set(g_table(1)[0])
    assert all(c == LEAF_Z for c in positions.values())


def test_label_encode_distinguishes_labels():
    a = label_encode(lztree("a"), ["a", "b"])
    b = label_encode(lztree("b"), ["a", "b"])
    assert tree_canon(a) != tree_canon(b)


def test_label_encode_shift_invariant():
    x = lztree("a", {0: lztree("a"), 2: lztree("a")})
    y = lztree("a", {7: lztree("a"), 9: lztree("a")})
    assert tree_canon(label_encode(x)) == tree_canon(label_encode(y))


def test_g_table_cap():
    with pytest.raises(TreeError):
        g_table(17)


def test_json_round_trip():
    for T in enumerate_regtrees(3, pool_cap=6)[:40]:
        j = json.loads(json.dumps(regtree_to_json(T)))
        assert tree_iso(regtree_from_json(j), T)
    z = ztree({0: LEAF_Z, 3: ztree({1: LEAF_Z})})
    assert ztree_from_json(json.loads(json.dumps(ztree_to_json(z)))) == z


def test_decode_rejects_non_encoding():
    with pytest.raises(TreeError):
        decode_order(parse_term("w(1)"))

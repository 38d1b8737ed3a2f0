import pytest

from scatterjump import relations as rl
from scatterjump.reductions import (A, CATALOG, CatalogError, apply_reduction, catalog_reduction, mutate,
                                    verify_reduction)
from scatterjump.relations import AtomVal, FinSet, GroupMap, LassoZ, TupleVal

O, I = AtomVal(0), AtomVal(1)


def test_catalog_names():
    assert len(CATALOG) == 11
    with pytest.raises(CatalogError):
        catalog_reduction("r_nonexistent")


def test_provenance_present():
    for name in CATALOG:
        assert catalog_reduction(name).provenance


def test_zjump_to_fs_periodic():
    r = catalog_reduction("r_zjump_to_fs", {"inner": "delta2"})
    x = LassoZ((O, I), (), (O, I), 0)
    img = r.map(x)
    assert set(img.elements) == {TupleVal((A, O, I)), TupleVal((A, I, O))}


def test_zjump_to_fs_aperiodic_not_finite():
    r = catalog_reduction("r_zjump_to_fs", {"inner": "delta2"})
    with pytest.raises(rl.RepresentabilityError):
        apply_reduction(r, LassoZ((O,), (I,), (O,), 0), finite=True)


def test_dcc_phi_prefixes():
    r = catalog_reduction("r_dcc_phi", {"truncation": 3})
    x = r.points(3)[5]
    img = r.map(x)
    for n, gm in enumerate(img.items, start=1):
        for g in (0, 1):
            assert gm.at(g) == TupleVal(x.at(g).items[:n])


def test_power_into_jump_default():
    r = catalog_reduction("r_power_into_jump")
    x = rl.seq_default({}, O)
    img = r.map(x)
    assert isinstance(img, GroupMap) and img.default == A
    assert all(v == O for _, v in img.support)


def test_subgroup_pads_odd_positions():
    r = catalog_reduction("r_subgroup")
    x = LassoZ((O,), (I, O, I), (I,), 1)
    y = r.map(x)
    assert all(y.at(a) == A for a in range(-9, 10, 2))
    assert all(y.at(2 * a) == x.at(a) for a in range(-5, 6))


def test_free_to_pi_cells():
    r = catalog_reduction("r_free_to_pi")
    x = LassoZ((O,), (I, I, O, I), (O,), 0)
    assert rl.freeness(r.source, x).free
    y = r.map(x)
    for n in range(-6, 7):
        p, run = rl.point_at(y, n).items
        assert run.items[0] == x.at(n)
        assert p == rl.pattern_at(r.source.inner, x, n)
    shifted = LassoZ(x.left, x.mid, x.right, x.origin + 3)
    assert r.target.decide(y, r.map(shifted))


def test_a_step_symmetric_input():
    # for the all-zero input α_x(s) is the indicator of s
    r = catalog_reduction("r_a_step", {"level": 1})
    y = r.map(rl.LassoSeq((), (0,)))
    for s in [frozenset(), frozenset({0}), frozenset({1, 3})]:
        v = rl.point_at(y, s)
        assert all(v.at(i) == (1 if i in s else 0) for i in range(8))


@pytest.mark.parametrize("name", ["r_quotient", "r_zjump_to_fs", "r_dcc_phi", "r_limit_to_product"])
def test_verify_fast_reductions(name):
    rep = verify_reduction(catalog_reduction(name))
    assert rep.ok, rep.to_json(timing=False)
    assert rep.pairs_checked > 0


def test_mutant_is_caught():
    r = catalog_reduction("r_quotient")
    pts = r.points(r.bound)
    rep = verify_reduction(mutate(r, pts), points=pts)
    assert not rep.ok


def test_bound_cap():
    r = catalog_reduction("r_dcc_phi")
    with pytest.raises(CatalogError):
        verify_reduction(r, bound=r.max_bound + 1)

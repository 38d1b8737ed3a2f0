import pytest

from scatterjump import relations as rl
from scatterjump.order_terms import ONE, ZERO, Fin, OmegaRep, OmegaStarRep, OrderError, ZetaRep, canonicalize
from scatterjump.oracles import (CapExceeded, brute_shift_equiv, census, enumerate_finite_terms,
                                 enumerate_terms, invariant_signature, window_eval)
from scatterjump.relations import AtomVal, LassoZ

O, I = AtomVal(0), AtomVal(1)

# first recorded run; a change here means the enumerator changed
CENSUS_SIZE_4 = 125


def test_enumerate_size_1():
    assert set(enumerate_terms(1)) == {ZERO, ONE}


def test_enumerate_size_2():
    got = set(enumerate_terms(2))
    assert {Fin(2), OmegaRep(ONE), OmegaStarRep(ONE)} <= got


def test_census_regression():
    assert census(4) == CENSUS_SIZE_4


def test_enumeration_has_no_duplicates():
    ts = list(enumerate_terms(5))
    assert len(ts) == len(set(ts))


def test_cap():
    with pytest.raises(CapExceeded):
        list(enumerate_terms(10))


def test_finite_terms_are_finite():
    from scatterjump.order_terms import is_repetition_free
    assert all(is_repetition_free(t) for t in enumerate_finite_terms(5))


def test_signature_omega():
    s = invariant_signature(OmegaRep(ONE))
    assert s.rank == 1
    assert (s.flags.has_min, s.flags.has_max) == (True, False)
    assert len(s.derivative_chain) == 1


def test_signature_zeta():
    s = invariant_signature(ZetaRep(ONE))
    assert s.rank == 1
    assert (s.flags.has_min, s.flags.has_max) == (False, False)


def test_signature_point():
    s = invariant_signature(ONE)
    assert s.rank == 0 and s.derivative_chain == ()


def test_signature_empty():
    with pytest.raises(OrderError):
        invariant_signature(ZERO)


def test_signature_respects_isomorphism():
    by_canon = {}
    for t in enumerate_terms(5):
        if t != ZERO:
            by_canon.setdefault(canonicalize(t), set()).add(invariant_signature(t))
    assert all(len(s) == 1 for s in by_canon.values())


def test_brute_shift():
    x = LassoZ((O,), (I,), (O,), 0)
    assert brute_shift_equiv(x, LassoZ((O,), (I,), (O,), 7)) == 7
    assert brute_shift_equiv(LassoZ((O, I), (), (O, I), 0), LassoZ((I, O), (), (I, O), 0)) == 1
    assert brute_shift_equiv(x, LassoZ((O,), (I, I), (O,), 0)) is None


def test_window_eval_reflexive():
    R = rl.make_relation("jump(delta2,Z)")
    for x in rl.enumerate_lassos([O, I], 2, 2)[:40]:
        assert window_eval(R, x, x)


def test_window_excluding_witness():
    R = rl.make_relation("jump(delta2,Z)")
    x, y = LassoZ((O,), (I,), (O,), 0), LassoZ((O,), (I,), (O,), 5)
    assert rl.rel_decide(R, x, y)
    assert not window_eval(R, x, y, window=range(-2, 3))
    assert window_eval(R, x, y, window=range(-6, 7))

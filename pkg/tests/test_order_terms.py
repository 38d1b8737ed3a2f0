import pytest
from hypothesis import given, settings, strategies as st

from scatterjump.order_terms import (ONE, ZERO, Fin, Isomorphic, NonIsomorphic, OmegaRep, OmegaStarRep,
                                     ParseError, Sum, ZetaRep, canonicalize, complete_hull, derivative,
                                     drop_min, end_flags, is_complete, iso_terms, parse_term, rank,
                                     render_term, rewrites)
from scatterjump.oracles import enumerate_terms

W, WS, Z = OmegaRep, OmegaStarRep, ZetaRep


def iso(a, b):
    return isinstance(iso_terms(a, b), Isomorphic)


def test_parse():
    assert parse_term("z(1)+1+z(1)") == Sum((Z(ONE), ONE, Z(ONE)))
    assert parse_term("0") == ZERO
    assert parse_term("w(2)") == W(Fin(2))


@pytest.mark.parametrize("bad", ["w(", "1+", "q(1)", ")", ""])
def test_parse_errors(bad):
    with pytest.raises(ParseError):
        parse_term(bad)


def test_render_round_trip():
    # ω*·A + ω·A is printed as ζ(A), so compare denotations
    for t in enumerate_terms(4):
        assert canonicalize(parse_term(render_term(t))) == canonicalize(t)
    assert render_term(Sum((WS(ONE), W(ONE)))) == "z(1)"


def test_end_flags():
    f = end_flags(W(ONE))
    assert (f.has_min, f.has_max) == (True, False)
    f = end_flags(Z(ONE))
    assert (f.has_min, f.has_max) == (False, False)
    f = end_flags(Sum((Fin(2), W(ONE))))
    assert (f.has_min, f.has_max) == (True, False)


def test_derivative():
    assert iso(derivative(W(ONE)), ONE)
    assert iso(derivative(Sum((Z(ONE), ONE, Z(ONE)))), Fin(3))
    assert iso(derivative(W(W(ONE))), W(ONE))


def test_drop_min():
    assert iso(drop_min(Fin(3)), Fin(2))
    assert iso(drop_min(ONE), ZERO)
    assert iso(drop_min(W(Fin(2))), Sum((ONE, W(Fin(2)))))


def test_rank():
    assert rank(ONE) == 0
    assert rank(W(W(ONE))) == 2
    assert rank(Sum((Z(ONE), ONE, Z(ONE)))) == 2


def test_canonicalize():
    assert canonicalize(Sum((ONE, W(ONE)))) == canonicalize(W(ONE))
    assert canonicalize(W(Fin(2))) == canonicalize(W(ONE))
    assert canonicalize(Fin(2)) == Fin(2)


def test_iso_verdicts():
    assert iso(Sum((WS(ONE), W(ONE))), Z(ONE))
    v = iso_terms(W(ONE), Z(ONE))
    assert isinstance(v, NonIsomorphic) and v.invariant == "has_min"
    v = iso_terms(W(Z(ONE)), Z(Z(ONE)))
    assert isinstance(v, NonIsomorphic)


def test_completeness():
    assert is_complete(Z(ONE))
    assert not is_complete(W(Z(ONE)))
    assert is_complete(Sum((ONE, Z(ONE), ONE, Z(ONE), ONE)))


def test_complete_hull():
    assert iso(complete_hull(W(ONE)), W(ONE))
    h = complete_hull(W(Z(ONE)))
    assert iso(h, W(Sum((Z(ONE), ONE))))
    assert is_complete(h)
    assert complete_hull(ZERO) == ZERO


_terms = list(enumerate_terms(5))


@settings(max_examples=150, deadline=None)
@given(st.sampled_from(_terms))
def test_rewrites_preserve_canonical_form(t):
    c = canonicalize(t)
    for _, _, r in rewrites(t):
        assert canonicalize(r) == c


@settings(max_examples=150, deadline=None)
@given(st.sampled_from(_terms), st.sampled_from(_terms))
def test_iso_agrees_with_canonical_equality(a, b):
    assert iso(a, b) == (canonicalize(a) == canonicalize(b))


@settings(max_examples=100, deadline=None)
@given(st.sampled_from([t for t in _terms if t != ZERO]))
def test_hull_is_complete_and_idempotent(t):
    h = complete_hull(t)
    assert is_complete(h)
    assert iso(complete_hull(h), h)

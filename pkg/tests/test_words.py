from hypothesis import given, strategies as st

from scatterjump.words import (least_rotation, omega_normal, primitive_root, rotate, shift_witness, z_at,
                               z_normal, z_shift_canon)

bits = st.lists(st.integers(0, 2), min_size=1, max_size=6)


def test_primitive_root():
    assert primitive_root("abab") == tuple("ab")
    assert primitive_root("aba") == tuple("aba")


def test_least_rotation():
    assert rotate("bca", least_rotation("bca")) == tuple("abc")


@given(bits, st.integers(0, 5))
def test_rotation_canonical(w, r):
    a = rotate(w, least_rotation(w))
    b = rotate(rotate(w, r % len(w)), least_rotation(rotate(w, r % len(w))))
    assert a == b


@given(st.lists(st.integers(0, 1), max_size=4), bits)
def test_omega_normal_same_sequence(prefix, period):
    p, q = omega_normal(prefix, period)
    full = lambda a, b, i: a[i] if i < len(a) else b[(i - len(a)) % len(b)]
    assert all(full(prefix, period, i) == full(p, q, i) for i in range(30))


@given(bits, st.lists(st.integers(0, 2), max_size=4), bits, st.integers(-5, 5))
def test_z_normal_same_word(left, mid, right, origin):
    l, m, r, o, _ = z_normal(left, mid, right, origin)
    for i in range(-25, 25):
        assert z_at(left, mid, right, origin, i) == z_at(l, m, r, o, i)


@given(bits, st.lists(st.integers(0, 2), max_size=4), bits, st.integers(-5, 5), st.integers(-6, 6))
def test_shift_witness_recovers_shift(left, mid, right, origin, k):
    cx = z_shift_canon(left, mid, right, origin)
    cy = z_shift_canon(left, mid, right, origin + k)
    g = shift_witness(cx, cy)
    assert g is not None
    assert all(z_at(left, mid, right, origin + k, a) == z_at(left, mid, right, origin, a - g)
               for a in range(-25, 25))

"""Finite-word utilities: primitive roots, least rotations, and lasso normal forms.

A one-sided lasso is ``prefix + period^ω``.  A ℤ-lasso is a bi-infinite word
``...LLL M RRR...`` whose middle starts at a given origin.  All normal forms
here work on arbitrary hashable cells; orderings use an explicit key function.
"""
from __future__ import annotations

from math import gcd
from typing import Callable, Hashable, Sequence

Word = tuple


def lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


def primitive_root(w: Sequence) -> Word:
    w = tuple(w)
    n = len(w)
    for p in range(1, n + 1):
        if n % p == 0 and w[:p] * (n // p) == w:
            return w[:p]
    return w


def least_rotation(w: Sequence, key: Callable = lambda c: c) -> int:
    """Index r such that w[r:] + w[:r] is least under ``key`` (first such r)."""
    w = tuple(w)
    if not w:
        return 0
    keys = [key(c) for c in w]
    best = 0
    best_rot = keys
    for r in range(1, len(w)):
        rot = keys[r:] + keys[:r]
        if rot < best_rot:
            best, best_rot = r, rot
    return best


def rotate(w: Sequence, r: int) -> Word:
    w = tuple(w)
    if not w:
        return w
    r %= len(w)
    return w[r:] + w[:r]


def omega_normal(prefix: Sequence, period: Sequence) -> tuple[Word, Word]:
    """Shortest presentation of ``prefix + period^ω``."""
    u = tuple(prefix)
    v = primitive_root(period)
    while u and u[-1] == v[-1]:
        v = (v[-1],) + v[:-1]
        u = u[:-1]
    return u, v


def omega_star_normal(period: Sequence, suffix: Sequence) -> tuple[Word, Word]:
    """Shortest presentation of ``^ω period + suffix`` (left-infinite)."""
    u = tuple(suffix)
    p = primitive_root(period)
    while u and u[0] == p[0]:
        p = p[1:] + (p[0],)
        u = u[1:]
    return p, u


def z_at(left: Sequence, mid: Sequence, right: Sequence, origin: int, i: int):
    m = len(mid)
    if i < origin:
        return left[(i - origin) % len(left)]
    if i < origin + m:
        return mid[i - origin]
    return right[(i - origin - m) % len(right)]


def z_normal(left: Sequence, mid: Sequence, right: Sequence, origin: int = 0):
    """Exact normal form of a ℤ-lasso (positions are kept).

    Returns ``(left, mid, right, origin, periodic)``.  A fully periodic word is
    returned as ``(P, (), P, 0, True)`` with ``P`` read from positions 0..p-1.
    Otherwise the periods are primitive and the middle is the shortest window
    outside of which the word follows its tails.
    """
    left, mid, right = tuple(left), tuple(mid), tuple(right)
    if not left or not right:
        raise ValueError("lasso periods must be nonempty")
    p = len(primitive_root(left))
    q = len(primitive_root(right))
    k = len(mid) + p + q + 2
    lo = origin - k * p
    hi = origin + len(mid) + k * q

    def at(i):
        return z_at(left, mid, right, origin, i)

    n0 = hi
    for i in range(lo + p, hi):
        if at(i) != at(i - p):
            n0 = i
            break
    if n0 == hi:
        period = tuple(at(i) for i in range(p))
        return period, (), period, 0, True
    m0 = lo
    for i in range(hi - q - 1, lo - 1, -1):
        if at(i) != at(i + q):
            m0 = i + 1
            break
    end = max(m0, n0)
    new_left = tuple(at(i) for i in range(n0 - p, n0))
    new_mid = tuple(at(i) for i in range(n0, end))
    new_right = tuple(at(i) for i in range(end, end + q))
    return new_left, new_mid, new_right, n0, False


def z_shift_canon(left: Sequence, mid: Sequence, right: Sequence, origin: int = 0,
                  key: Callable = lambda c: c):
    """Canonical presentation of a ℤ-lasso up to shift.

    Returns ``(triple, anchor, period)``: ``triple`` is the shift-invariant
    ``(left, mid, right)``; ``anchor`` is a position of the input where the
    canonical presentation starts; ``period`` is the shift period for fully
    periodic words (anchors are then determined modulo it), else 0.
    """
    nl, nm, nr, start, periodic = z_normal(left, mid, right, origin)
    if periodic:
        r = least_rotation(nl, key)
        rot = rotate(nl, r)
        return (rot, (), rot), r, len(nl)
    return (nl, nm, nr), start, 0


def shift_witness(cx, cy) -> int | None:
    """Least-magnitude γ with y(α) = x(α − γ), given two ``z_shift_canon`` results.

    Ties are broken toward the positive shift.
    """
    (tx, ax, px), (ty, ay, py) = cx, cy
    if tx != ty:
        return None
    g = ay - ax
    if px == 0:
        return g
    g %= px
    if g > px - g:
        return g - px
    return g

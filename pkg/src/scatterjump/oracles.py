"""Brute-force oracles and invariants used to cross-check the decision procedures.

Nothing here calls ``canonicalize`` or the jump canonicalizers, so agreement
between these functions and the fast paths is evidence and not a tautology.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator

from .order_terms import (ONE, ZERO, Atom, EndFlags, Fin, OmegaRep, OmegaStarRep, OrderError, Sum,
                          ZetaRep, _is_empty, end_flags, erase_labels, is_point, quotient)
from .words import lcm

TERM_SIZE_CAP = 9


class CapExceeded(ValueError):
    pass


# ---------------------------------------------------------------- enumeration

def enumerate_terms(size: int, cap: int = TERM_SIZE_CAP) -> Iterator:
    """All unlabelled terms of structural size ≤ ``size`` in sum-normal syntax.

    Sums are flat, have no Zero parts and never put two plain chains side by
    side; repetition bodies are nonempty.  Every such term appears once.
    """
    if size > cap:
        raise CapExceeded(f"term size {size} exceeds the cap {cap}")
    if size >= 1:
        yield ZERO
    for s in range(1, size + 1):
        yield from _exact(s)


@lru_cache(maxsize=None)
def _exact(s: int) -> tuple:
    return _items(s) + tuple(_sums(s))


@lru_cache(maxsize=None)
def _items(s: int) -> tuple:
    """Non-sum, nonzero terms of size exactly s."""
    out = [ONE] if s == 1 else [Fin(s)]
    if s >= 2:
        for body in _exact(s - 1):
            out += [OmegaRep(body), OmegaStarRep(body), ZetaRep(body)]
    return tuple(out)


def _plain(t) -> bool:
    return isinstance(t, (Atom, Fin))


@lru_cache(maxsize=None)
def _seqs(s: int) -> tuple:
    """Sequences of items of total size s with no two adjacent plain items."""
    out = [(t,) for t in _items(s)]
    for k in range(1, s):
        for head in _items(k):
            for tail in _seqs(s - k):
                if not (_plain(head) and _plain(tail[0])):
                    out.append((head,) + tail)
    return tuple(out)


def _sums(s: int):
    for seq in _seqs(s):
        if len(seq) >= 2:
            yield Sum(seq)


def enumerate_finite_terms(size: int) -> Iterator:
    """Raw repetition-free syntax trees of size ≤ ``size``: nested sums, Zero parts allowed."""
    for s in range(1, size + 1):
        yield from _raw(s)


@lru_cache(maxsize=None)
def _raw(s: int) -> tuple:
    out = [ZERO, ONE] if s == 1 else [Fin(s)]
    for parts in _raw_parts(s, 2):
        out.append(Sum(parts))
    return tuple(out)


@lru_cache(maxsize=None)
def _raw_parts(s: int, k: int) -> tuple:
    """Tuples of at least k raw terms with total size s."""
    out = []
    for first in range(1, s):
        for head in _raw(first):
            if k <= 2:
                out += [(head,) + (t,) for t in _raw(s - first)]
            for tail in _raw_parts(s - first, max(k - 1, 2)):
                out.append((head,) + tail)
    return tuple(out)


def census(size: int) -> int:
    return sum(1 for _ in enumerate_terms(size))


# ---------------------------------------------------------------- invariants

@dataclass(frozen=True)
class InvariantSignature:
    rank: int
    flags: EndFlags
    derivative_chain: tuple


def _singletons(q) -> tuple:
    """(first class is a point, last class is a point, number of point classes or None)."""
    def count(t, rep: bool):
        if isinstance(t, Atom):
            hit = t.label.is_point
            return (None if rep else 1) if hit else 0
        if isinstance(t, Sum):
            total = 0
            for p in t.parts:
                c = count(p, rep)
                if c is None:
                    return None
                total += c
            return total
        if isinstance(t, (OmegaRep, OmegaStarRep, ZetaRep)):
            return count(t.body, True)
        return 0

    def first(t):
        if isinstance(t, Atom):
            return t.label.is_point
        if isinstance(t, Sum):
            return first(t.parts[0])
        if isinstance(t, OmegaRep):
            return first(t.body)
        return False

    def last(t):
        if isinstance(t, Atom):
            return t.label.is_point
        if isinstance(t, Sum):
            return last(t.parts[-1])
        if isinstance(t, OmegaStarRep):
            return last(t.body)
        return False

    return first(q), last(q), count(q, False)


def invariant_signature(t) -> InvariantSignature:
    if _is_empty(t):
        raise OrderError("the empty order has no invariant signature")
    flags = end_flags(t)
    chain = []
    cur = t
    while not is_point(cur):
        q = quotient(cur)
        pattern = _singletons(q)
        cur = erase_labels(q)
        chain.append((end_flags(cur), pattern))
    return InvariantSignature(len(chain), flags, tuple(chain))


# ---------------------------------------------------------------- shifts

def brute_shift_equiv(x, y) -> int | None:
    """Least-magnitude k with y(α) = x(α − k) for all α, ties toward positive k.

    Scans every k within |origin_x - origin_y| + |mid_x| + |mid_y| + 2·lcm(periods)
    and compares the two words on a window that covers both middles plus two
    full common periods on each side; beyond that both are periodic.
    """
    L = 1
    for w in (x.left, x.right, y.left, y.right):
        L = lcm(L, len(w))
    B = abs(x.origin - y.origin) + len(x.mid) + len(y.mid) + 2 * L
    lo = min(x.origin, y.origin) - B - 2 * L
    hi = max(x.origin + len(x.mid), y.origin + len(y.mid)) + B + 2 * L
    for k in sorted(range(-B, B + 1), key=lambda v: (abs(v), -v)):
        if all(y.at(a) == x.at(a - k) for a in range(lo, hi + 1)):
            return k
    return None


# ---------------------------------------------------------------- bounded evaluation

def window_eval(R, x, y, window=None, radius: int = 3) -> bool:
    """Evaluate ``x R y`` with every jump quantifier ranging over ``window``.

    Jumps become ∃γ∈W ∀α∈W; anything else falls back to ``R.decide``.  The
    default window is ``R.group.window(radius)`` at each jump level.
    """
    from .relations import Jump, point_at

    if not isinstance(R, Jump):
        return R.decide(x, y)
    G = R.group
    W = list(window) if window is not None else G.window(radius)
    for g in W:
        gi = G.inv(g)
        ok = True
        for a in W:
            xa = _at(x, G.mul(gi, a), point_at)
            ya = _at(y, a, point_at)
            if not window_eval(R.inner, xa, ya, window, radius):
                ok = False
                break
        if ok:
            return True
    return False


def _at(x, g, point_at):
    from .relations import GroupMap

    if isinstance(x, GroupMap) and isinstance(x.default, GroupMap) and isinstance(g, tuple):
        # ℤ² given column-wise
        return x.at(g[0]).at(g[1])
    return point_at(x, g)

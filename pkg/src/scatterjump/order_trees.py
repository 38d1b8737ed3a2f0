"""Regular scattered order trees, ℤ-trees and the encodings between them and orders.

A RegTree node carries a regular word of subtrees (an order term whose atoms
are labelled by subtrees; unlabelled points stand for leaves).  Children of a
scattered order tree form a suborder of ℤ, so child words are single
condensation classes: finite, ω-, ω*- or ℤ-words.

A ZTree node carries a ℤ-lasso of optional subtrees: position k holds the
child at k, or None when there is no child there.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from typing import Any

from . import order_terms as ot
from .order_terms import (ONE, ZERO, Atom, ClassWord, Fin, OmegaRep, OmegaStarRep, Sum, Zero,
                          ZetaRep, canonicalize, class_term, condense, is_point, make_sum, quotient)
from .words import z_normal, z_shift_canon


class TreeError(ValueError):
    pass


# ---------------------------------------------------------------- trees

@dataclass(frozen=True)
class RegTree:
    children: Any = ZERO

    def sort_key(self) -> tuple:
        return (20, self.children.sort_key())

    @property
    def is_leaf(self) -> bool:
        return ot._is_empty(self.children)


LEAF = RegTree(ZERO)


@dataclass(frozen=True)
class ZTree:
    left: tuple
    mid: tuple
    right: tuple
    origin: int = 0

    def cells(self) -> tuple:
        return self.left + self.mid + self.right

    @property
    def is_leaf(self) -> bool:
        return all(c is None for c in self.cells())

    def at(self, i: int):
        from .words import z_at
        return z_at(self.left, self.mid, self.right, self.origin, i)

    def sort_key(self) -> tuple:
        return (30, tuple(map(_ckey, self.left)), tuple(map(_ckey, self.mid)),
                tuple(map(_ckey, self.right)), self.origin)


@dataclass(frozen=True)
class LZTree:
    """A ℤ-tree with a label on every node."""
    label: str
    left: tuple
    mid: tuple
    right: tuple
    origin: int = 0

    def cells(self) -> tuple:
        return self.left + self.mid + self.right

    def sort_key(self) -> tuple:
        return (40, self.label, tuple(map(_ckey, self.left)), tuple(map(_ckey, self.mid)),
                tuple(map(_ckey, self.right)), self.origin)


def _ckey(c) -> tuple:
    return (0,) if c is None else (1, c.sort_key())


LEAF_Z = ZTree((None,), (), (None,), 0)


def ztree(positions: dict, origin_cells: int | None = None) -> ZTree:
    """ZTree with finitely many children at the given positions."""
    if not positions:
        return LEAF_Z
    lo, hi = min(positions), max(positions)
    mid = tuple(positions.get(i) for i in range(lo, hi + 1))
    return ZTree((None,), mid, (None,), lo)


def lztree(label: str, positions: dict | None = None) -> LZTree:
    positions = positions or {}
    if not positions:
        return LZTree(label, (None,), (), (None,), 0)
    lo, hi = min(positions), max(positions)
    return LZTree(label, (None,), tuple(positions.get(i) for i in range(lo, hi + 1)), (None,), lo)


def _subst(t, fn):
    """Replace every point (unlabelled points included) by ``fn(label)``."""
    if isinstance(t, Atom):
        return fn(t.label)
    if isinstance(t, Fin):
        return make_sum([fn(ot.DEFAULT)] * t.n)
    if isinstance(t, Zero):
        return t
    if isinstance(t, Sum):
        return make_sum(_subst(p, fn) for p in t.parts)
    return type(t)(_subst(t.body, fn))


def _sub(label) -> RegTree:
    return label if isinstance(label, RegTree) else LEAF


def tree_rank(t) -> int:
    if isinstance(t, RegTree):
        if t.is_leaf:
            return 1
        return 1 + max(tree_rank(_sub(lab)) for lab in ot.labels(t.children))
    if isinstance(t, (ZTree, LZTree)):
        kids = [c for c in t.cells() if c is not None]
        return 1 + max(map(tree_rank, kids)) if kids else 1
    raise TreeError(f"not a tree: {t!r}")


@lru_cache(maxsize=None)
def tree_canon(t):
    if isinstance(t, RegTree):
        if t.is_leaf:
            return LEAF
        kids = _subst(t.children, lambda lab: Atom(tree_canon(_sub(lab))))
        return RegTree(canonicalize(kids))
    if isinstance(t, ZTree):
        f = lambda c: None if c is None else tree_canon(c)
        (l, m, r), _, _ = z_shift_canon(tuple(map(f, t.left)), tuple(map(f, t.mid)),
                                        tuple(map(f, t.right)), t.origin, key=_ckey)
        return ZTree(l, m, r, 0)
    if isinstance(t, LZTree):
        f = lambda c: None if c is None else tree_canon(c)
        (l, m, r), _, _ = z_shift_canon(tuple(map(f, t.left)), tuple(map(f, t.mid)),
                                        tuple(map(f, t.right)), t.origin, key=_ckey)
        return LZTree(t.label, l, m, r, 0)
    raise TreeError(f"not a tree: {t!r}")


def tree_iso(a, b) -> bool:
    return tree_canon(a) == tree_canon(b)


def child_class(t: RegTree) -> ClassWord:
    """The child word of a node as a single condensation class."""
    d = condense(t.children)
    if not isinstance(d, ot.One):
        raise TreeError("children do not form a suborder of ℤ")
    return d.c


def word_to_term(left, mid, right, letter) -> Any:
    parts = []
    if left:
        parts.append(OmegaStarRep(make_sum(letter(c) for c in left)))
    parts.append(make_sum(letter(c) for c in mid))
    if right:
        parts.append(OmegaRep(make_sum(letter(c) for c in right)))
    return make_sum(parts)


# ---------------------------------------------------------------- order -> tree

def order_to_tree(L) -> RegTree:
    """Condensation tree: nodes at height k are the classes of the k-th condensation."""
    if ot._is_empty(L):
        raise ot.OrderError("the empty order has no condensation tree")
    k = 0
    t = L
    while not is_point(t):
        t = quotient(t)
        k += 1
    if k == 0:
        return LEAF
    (label,) = ot.labels(t)
    return _class_tree(label, k)


def _class_tree(letter, k: int) -> RegTree:
    if k == 0:
        return LEAF
    kids = _subst(class_term(letter), lambda lab: Atom(_class_tree(lab, k - 1)))
    return RegTree(kids)


# ---------------------------------------------------------------- tree -> order

Z1 = ZetaRep(ONE)
SEP_MARK = "sep"


def _double(t):
    if isinstance(t, Atom):
        return Fin(2) if t.label == ot.DEFAULT else Sum((t, t))
    if isinstance(t, Fin):
        return Fin(2 * t.n)
    if isinstance(t, Zero):
        return t
    if isinstance(t, Sum):
        return make_sum(_double(p) for p in t.parts)
    return type(t)(_double(t.body))


def tree_to_order(T: RegTree, complete: bool = False, annotate: bool = False):
    """Encode a tree as a scattered order.

    A leaf is one point.  A node becomes the sum over its child word of
    ``5 + ζ + 2·E(child) + ζ`` followed by the separator ``ζ + 1 + ζ``
    (``1 + ζ + 1 + ζ + 1`` when ``complete``); complete blocks also pad the
    doubled child with a point on each side.  Doubling makes every finite
    condensation class inside a child even, so the 5-point marker and the
    separator's middle point are recognisable in the condensation.
    With ``annotate`` the top separator's middle point is labelled ``sep``.
    """
    return _encode(T, complete, SEP_MARK if annotate else None)


@lru_cache(maxsize=None)
def _encode(T: RegTree, complete: bool, mark):
    if T.is_leaf:
        return ONE
    mid = Atom(mark) if mark else ONE

    def block(label):
        inner = _double(_encode(_sub(label), complete, None))
        if complete:
            return make_sum([Fin(5), Z1, ONE, inner, ONE, Z1])
        return make_sum([Fin(5), Z1, inner, Z1])

    body = _subst(T.children, block)
    sep = [ONE, Z1, mid, Z1, ONE] if complete else [Z1, mid, Z1]
    return make_sum([body] + sep)


_MARK = ClassWord(None, (ot.DEFAULT,) * 5, None)
_ZC = ClassWord((ot.DEFAULT,), (), (ot.DEFAULT,))
_PT = ClassWord(None, (ot.DEFAULT,), None)


def decode_order(L) -> RegTree:
    """Inverse of ``tree_to_order(·, complete=False)`` on its image."""
    if is_point(L):
        return LEAF
    q = quotient(L)
    parts = list(q.parts) if isinstance(q, Sum) else [q]
    hits = [i for i, p in enumerate(parts) if p == Atom(_PT)]
    if len(hits) != 1:
        raise TreeError("no unique separator point in the condensation")
    i = hits[0]
    if parts[i + 1:] != [Atom(_ZC)] or _last_letter(make_sum(parts[:i])) != _ZC:
        raise TreeError("separator is not of the form ζ + 1 + ζ")
    body = _drop_max(make_sum(parts[:i]))
    v = _eval_blocks(body)
    if not isinstance(v, _Marked) or not (v.pre is None or ot._is_empty(v.pre)):
        raise TreeError("child blocks do not start with a marker")
    left, mid, right = v.word
    if v.post is not None:
        mid = mid + (v.post,)
    return RegTree(word_to_term(left, mid, right, lambda b: Atom(_decode_block(b))))


def _decode_block(b) -> RegTree:
    if _first_letter(b) != _ZC or _last_letter(b) != _ZC:
        raise TreeError("child block is not bracketed by ζ classes")
    core = _drop_max(ot.drop_min(b))
    order = ot.map_labels(core, lambda c: class_term(_halve(c)))
    return decode_order(order)


def _halve(c: ClassWord) -> ClassWord:
    if c.is_finite:
        if len(c.mid) % 2:
            raise TreeError("odd finite class inside a doubled block")
        return ClassWord(None, c.mid[: len(c.mid) // 2], None)
    return c


def _first_letter(t):
    if isinstance(t, Atom):
        return t.label
    if isinstance(t, Sum):
        return _first_letter(next(p for p in t.parts if not ot._is_empty(p)))
    if isinstance(t, OmegaRep):
        return _first_letter(t.body)
    return None


def _last_letter(t):
    if isinstance(t, Atom):
        return t.label
    if isinstance(t, Sum):
        return _last_letter([p for p in t.parts if not ot._is_empty(p)][-1])
    if isinstance(t, OmegaStarRep):
        return _last_letter(t.body)
    return None


def _drop_max(t):
    if isinstance(t, Atom):
        return ZERO
    if isinstance(t, Fin):
        return ot.fin(t.n - 1)
    if isinstance(t, Sum):
        parts = [p for p in t.parts if not ot._is_empty(p)]
        return make_sum(parts[:-1] + [_drop_max(parts[-1])])
    if isinstance(t, OmegaStarRep):
        return make_sum([t, _drop_max(t.body)])
    raise ot.OrderError("order has no greatest element")


@dataclass(frozen=True)
class _Plain:
    content: Any


@dataclass(frozen=True)
class _Marked:
    """pre M b1 M b2 ... M post; ``word`` lists the blocks between markers.

    ``pre`` is None when markers are unbounded to the left, ``post`` when
    they are unbounded to the right."""
    pre: Any
    word: tuple
    post: Any


def _eval_blocks(t):
    if isinstance(t, Atom):
        if t.label == _MARK:
            return _Marked(ZERO, (None, (), None), ZERO)
        return _Plain(t)
    if isinstance(t, (Zero, Fin)):
        return _Plain(t)
    if isinstance(t, Sum):
        v = _Plain(ZERO)
        for p in t.parts:
            v = _cat(v, _eval_blocks(p))
        return v
    v = _eval_blocks(t.body)
    if isinstance(v, _Plain):
        return _Plain(type(t)(v.content))
    p, (wl, wm, wr), q = v.pre, v.word, v.post
    if p is None or q is None or wl is not None or wr is not None:
        raise TreeError("markers accumulate inside a repetition")
    period = wm + (make_sum([q, p]),)
    if isinstance(t, OmegaRep):
        return _Marked(p, (None, (), period), None)
    if isinstance(t, OmegaStarRep):
        return _Marked(None, (period, wm, None), q)
    return _Marked(None, (period, (), period), None)


def _cat(a, b):
    if isinstance(a, _Plain) and isinstance(b, _Plain):
        return _Plain(make_sum([a.content, b.content]))
    if isinstance(a, _Plain):
        if b.pre is None:
            if ot._is_empty(a.content):
                return b
            raise TreeError("content before an unbounded marker sequence")
        return _Marked(make_sum([a.content, b.pre]), b.word, b.post)
    if isinstance(b, _Plain):
        if a.post is None:
            if ot._is_empty(b.content):
                return a
            raise TreeError("content after an unbounded marker sequence")
        return _Marked(a.pre, a.word, make_sum([a.post, b.content]))
    if a.post is None or b.pre is None:
        raise TreeError("marker sequences meet at a limit")
    (l1, m1, _), (_, m2, r2) = a.word, b.word
    return _Marked(a.pre, (l1, m1 + (make_sum([a.post, b.pre]),) + m2, r2), b.post)


# ---------------------------------------------------------------- rank-3 absorption

def _code(t: RegTree) -> int:
    """Rank ≤ 2 subtree as a natural number: leaf 0, ω 1, ω* 2, ζ 3, n points n+3."""
    if t.is_leaf:
        return 0
    c = child_class(t)
    if c.is_finite:
        return len(c.mid) + 3
    if c.left is None:
        return 1
    if c.right is None:
        return 2
    return 3


def _uncode(k: int) -> RegTree:
    leaf = Atom(LEAF)
    if k == 0:
        return LEAF
    if k == 1:
        return RegTree(OmegaRep(leaf))
    if k == 2:
        return RegTree(OmegaStarRep(leaf))
    if k == 3:
        return RegTree(ZetaRep(leaf))
    return RegTree(make_sum([leaf] * (k - 3)))


def _bits_of(codes) -> tuple:
    out = ()
    for k in codes:
        out += (1, 1) + (0,) * (k + 1)
    return out


def enc3(T: RegTree) -> ZTree:
    """A tree of rank ≤ 3 as a subset of ℤ (a rank-2 ℤ-tree).

    Each child with code k contributes the block 11 0^(k+1); a word that ends
    (finite or ω*) gets a closing 11, and unbounded sides continue the blocks
    periodically while bounded sides are padded with empty positions.
    """
    if tree_rank(T) > 3:
        raise TreeError("enc3 needs rank at most 3")
    if T.is_leaf:
        left, mid, right = None, (), None
    else:
        c = child_class(T)
        f = lambda w: None if w is None else tuple(_code(_sub(x)) for x in w)
        left, mid, right = f(c.left), f(c.mid), f(c.right)
    bl = _bits_of(left) if left else (0,)
    bm = _bits_of(mid) + (() if right else (1, 1))
    br = _bits_of(right) if right else (0,)
    cell = lambda b: LEAF_Z if b else None
    return ZTree(tuple(map(cell, bl)), tuple(map(cell, bm)), tuple(map(cell, br)), 0)


def dec3(z: ZTree) -> RegTree:
    if any(c is not None and not c.is_leaf for c in z.cells()):
        raise TreeError("not a rank-2 ℤ-tree")
    bits = lambda w: tuple(0 if c is None else 1 for c in w)
    l, m, r, o, periodic = z_normal(bits(z.left), bits(z.mid), bits(z.right), z.origin)
    if periodic and l == (0,):
        raise TreeError("no children")
    left_zero, right_zero = l == (0,), r == (0,)
    if periodic:
        left_zero = right_zero = False
    span = 4 * (len(l) + len(r) + 4)
    lo, hi = o - span, o + len(m) + span
    at = lambda i: __import__("scatterjump.words", fromlist=["z_at"]).z_at(l, m, r, o, i)
    starts = []
    i = lo + 1
    while at(i) == 1:
        # the window may open inside a pair
        i += 1
    while i < hi - 2:
        if at(i) == 1:
            if at(i + 1) != 1 or at(i - 1) == 1 or at(i + 2) == 1:
                raise TreeError("ones do not come in isolated pairs")
            starts.append(i)
            i += 2
        else:
            i += 1
    if len(starts) < 1:
        raise TreeError("no children")
    codes = [b - a - 3 for a, b in zip(starts, starts[1:])]
    if any(k < 0 for k in codes):
        raise TreeError("malformed gap")
    nl = 0 if left_zero else sum(l) // 2
    nr = 0 if right_zero else sum(r) // 2
    if left_zero and right_zero:
        return _tree_from_codes(None, tuple(codes), None)
    if right_zero:
        # the last pair closes the word; the left side repeats
        return _tree_from_codes(tuple(codes[:nl]), tuple(codes[nl:]), None)
    if left_zero:
        return _tree_from_codes(None, tuple(codes[:-nr]), tuple(codes[-nr:]))
    return _tree_from_codes(tuple(codes[:nl]), tuple(codes[nl:-nr]), tuple(codes[-nr:]))


def _tree_from_codes(left, mid, right) -> RegTree:
    letter = lambda k: Atom(_uncode(k))
    if left is None and right is None and not mid:
        return LEAF
    return RegTree(word_to_term(left, mid, right, letter))


def sot_to_ztree(T: RegTree) -> ZTree:
    """Scattered order tree of rank 2+α to a ℤ-tree of rank 1+α (α ≥ 1)."""
    if tree_rank(T) < 3:
        raise TreeError("sot_to_ztree needs tree rank at least 3")
    return _sz(T)


def _sz(T: RegTree) -> ZTree:
    if tree_rank(T) <= 3:
        return enc3(T)
    c = child_class(T)
    f = lambda w: tuple(_sz(_sub(x)) for x in w)
    left = f(c.left) if c.left is not None else (None,)
    right = f(c.right) if c.right is not None else (None,)
    return ZTree(left, f(c.mid), right, 0)


def ztree_to_sot(z: ZTree) -> RegTree:
    """Left inverse of ``sot_to_ztree``; other trees read missing children as trivial trees."""
    if z.is_leaf:
        return LEAF
    if tree_rank(z) == 2:
        try:
            return dec3(z)
        except TreeError:
            pass
    else:
        word = _convex_word(z)
        if word is not None:
            left, mid, right = word
            return RegTree(word_to_term(left, mid, right, lambda c: Atom(ztree_to_sot(c))))
    f = lambda c: Atom(LEAF if c is None else ztree_to_sot(c))
    return RegTree(word_to_term(z.left, z.mid, z.right, f))


def _convex_word(z: ZTree):
    """The children as a word when they occupy an interval of positions."""
    l, m, r, o, periodic = z_normal(z.left, z.mid, z.right, z.origin)
    if periodic:
        return (l, (), r) if None not in l else None
    if None in m:
        return None
    lw = None if l == (None,) else l
    rw = None if r == (None,) else r
    if (lw and None in lw) or (rw and None in rw):
        return None
    return lw, m, rw


# ---------------------------------------------------------------- labelled trees

MAX_LABELS = 16


def g_table(n: int) -> list[frozenset]:
    """Rigid position sets: g(i) = {1, ..., i+1} ∪ {-(i+2)}."""
    if n > MAX_LABELS:
        raise TreeError(f"label alphabet larger than {MAX_LABELS}")
    return [frozenset(range(1, i + 2)) | {-(i + 2)} for i in range(n)]


def label_encode(T: LZTree, alphabet: list | None = None) -> ZTree:
    """Replace labels by rigid gadgets: the node keeps its children under a
    child at position 0 and gets leaf children at g(label)."""
    alphabet = sorted(alphabet if alphabet is not None else _all_labels(T))
    g = g_table(len(alphabet))
    index = {a: i for i, a in enumerate(alphabet)}
    return _lenc(T, tuple(g), tuple(sorted(index.items())))


@lru_cache(maxsize=None)
def _lenc(t: LZTree, g: tuple, index: tuple) -> ZTree:
    idx = dict(index)
    if t.label not in idx:
        raise TreeError(f"label {t.label!r} not in the alphabet")
    f = lambda c: None if c is None else _lenc(c, g, index)
    hub = ZTree(tuple(map(f, t.left)), tuple(map(f, t.mid)), tuple(map(f, t.right)), t.origin)
    if hub.is_leaf:
        hub = LEAF_Z
    positions = {k: LEAF_Z for k in g[idx[t.label]]}
    positions[0] = hub
    return ztree(positions)


def _all_labels(t: LZTree) -> set:
    out = {t.label}
    for c in t.cells():
        if c is not None:
            out |= _all_labels(c)
    return out


# ---------------------------------------------------------------- JSON

def regtree_to_json(t: RegTree) -> dict:
    names: dict = {}
    out: dict = {}

    def name(sub):
        sub = _sub(sub)
        if sub not in names:
            names[sub] = f"t{len(names)}"
            out[names[sub]] = regtree_to_json(sub)
        return names[sub]

    if t.is_leaf:
        return {"children": "0"}
    text = ot.render_term(t.children, label_fn=name)
    return {"children": text, "subtrees": out} if out else {"children": text}


def regtree_from_json(j: dict) -> RegTree:
    subs = {k: regtree_from_json(v) for k, v in j.get("subtrees", {}).items()}
    term = ot.parse_term(j.get("children", "0"))

    def lab(label):
        if label == ot.DEFAULT:
            return Atom(LEAF)
        if label not in subs:
            raise TreeError(f"unknown subtree name {label!r}")
        return Atom(subs[label])

    return RegTree(_subst(term, lab))


def ztree_to_json(t: ZTree) -> dict:
    f = lambda c: None if c is None else ztree_to_json(c)
    return {"left": [f(c) for c in t.left], "mid": [f(c) for c in t.mid],
            "right": [f(c) for c in t.right], "origin": t.origin}


def ztree_from_json(j: dict) -> ZTree:
    f = lambda c: None if c is None else ztree_from_json(c)
    return ZTree(tuple(map(f, j.get("left", [None]))), tuple(map(f, j.get("mid", []))),
                 tuple(map(f, j.get("right", [None]))), int(j.get("origin", 0)))


def dumps(t) -> str:
    if isinstance(t, RegTree):
        return json.dumps(regtree_to_json(t))
    return json.dumps(ztree_to_json(t))


# ---------------------------------------------------------------- enumeration

def child_words(pool: list, max_len: int = 2) -> list:
    """Child words over ``pool``: finite words up to ``max_len`` and one-letter ω, ω*, ζ words."""
    out = []
    for n in range(1, max_len + 1):
        for w in _words(pool, n):
            out.append(make_sum(Atom(t) for t in w))
    for t in pool:
        a = Atom(t)
        out += [OmegaRep(a), OmegaStarRep(a), ZetaRep(a)]
    return out


def _words(pool, n):
    if n == 0:
        yield ()
        return
    for t in pool:
        for rest in _words(pool, n - 1):
            yield (t,) + rest


def enumerate_regtrees(max_rank: int, pool_cap: int = 10) -> list:
    """Trees up to ``max_rank``, distinct up to tree_canon; deeper levels draw
    children from the first ``pool_cap`` trees of the level below."""
    levels = [[LEAF]]
    seen = {LEAF}
    for r in range(2, max_rank + 1):
        below = [t for lvl in levels for t in lvl]
        pool = levels[-1][:pool_cap] + ([LEAF] if r > 2 else [])
        fresh = []
        for w in child_words(pool if r > 2 else below):
            t = tree_canon(RegTree(w))
            if t not in seen and tree_rank(t) == r:
                seen.add(t)
                fresh.append(t)
        levels.append(fresh)
    return [t for lvl in levels for t in lvl]

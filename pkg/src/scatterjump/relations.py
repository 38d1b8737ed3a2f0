"""Decidable equivalence relations on finitely presented points.

Points are immutable values (atoms, tuples, finite-exception sequences,
lassos, finite sets, finite-support group maps and lazily evaluated
equivariant maps).  A relation bundles a decision procedure, a canonicalizer
and an enumerator.  Γ-jumps identify x and y when some translate of x agrees
with y coordinatewise up to the inner relation.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from functools import lru_cache, reduce
from math import gcd
from typing import Any, Callable, Iterable

from .words import lcm, omega_normal, shift_witness, z_at, z_normal, z_shift_canon


class SchemaError(ValueError):
    """A point does not fit the schema of the relation it was given to."""


class RepresentabilityError(ValueError):
    """A value would need an infinite presentation in the requested schema."""


# ---------------------------------------------------------------- point values

def gkey(g) -> tuple:
    if isinstance(g, frozenset):
        return (len(g), tuple(sorted(g)))
    if isinstance(g, tuple):
        return g
    return (g,)


def pkey(v) -> tuple:
    if isinstance(v, int):
        return (-1, v)
    if v is None:
        return (-2,)
    return v.sort_key()


@dataclass(frozen=True)
class AtomVal:
    n: int

    def sort_key(self):
        return (0, self.n)


@dataclass(frozen=True)
class Reserved:
    """A fresh letter (a, b, a_n, ...) inequivalent to every ordinary point."""
    tag: str
    index: Any = None

    def sort_key(self):
        return (1, self.tag, () if self.index is None else gkey(self.index))


@dataclass(frozen=True)
class TupleVal:
    items: tuple

    def sort_key(self):
        return (2, tuple(pkey(v) for v in self.items))


@dataclass(frozen=True)
class Tagged:
    tag: int
    value: Any

    def sort_key(self):
        return (3, self.tag, pkey(self.value))


@dataclass(frozen=True)
class SeqDefault:
    entries: tuple
    default: Any

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(sorted(self.entries, key=lambda e: e[0])))

    def at(self, i: int):
        for j, v in self.entries:
            if j == i:
                return v
        return self.default

    def sort_key(self):
        return (4, tuple((i, pkey(v)) for i, v in self.entries), pkey(self.default))


@dataclass(frozen=True)
class LassoSeq:
    prefix: tuple
    period: tuple

    def at(self, i: int):
        if i < len(self.prefix):
            return self.prefix[i]
        return self.period[(i - len(self.prefix)) % len(self.period)]

    def normal(self) -> "LassoSeq":
        return LassoSeq(*omega_normal(self.prefix, self.period))

    def sort_key(self):
        return (5, tuple(map(pkey, self.prefix)), tuple(map(pkey, self.period)))


@dataclass(frozen=True)
class LassoZ:
    left: tuple
    mid: tuple
    right: tuple
    origin: int = 0

    def at(self, i: int):
        return z_at(self.left, self.mid, self.right, self.origin, i)

    def normal(self) -> "LassoZ":
        l, m, r, o, _ = z_normal(self.left, self.mid, self.right, self.origin)
        return LassoZ(l, m, r, o)

    def is_periodic(self) -> bool:
        return z_normal(self.left, self.mid, self.right, self.origin)[4]

    def extent(self) -> tuple[int, int, int]:
        """(lo, hi, L): the middle spans [lo, hi) and L = lcm of periods."""
        return self.origin, self.origin + len(self.mid), lcm(len(self.left), len(self.right))

    def map(self, fn) -> "LassoZ":
        return LassoZ(tuple(map(fn, self.left)), tuple(map(fn, self.mid)),
                      tuple(map(fn, self.right)), self.origin)

    def sort_key(self):
        return (6, tuple(map(pkey, self.left)), tuple(map(pkey, self.mid)),
                tuple(map(pkey, self.right)), self.origin)


@dataclass(frozen=True)
class FinSet:
    elements: tuple

    def sort_key(self):
        return (7, tuple(pkey(v) for v in self.elements))


@dataclass(frozen=True)
class GroupMap:
    """Finite support plus a default; with ``indexed`` the default at g is Reserved(tag, g)."""
    support: tuple
    default: Any
    indexed: bool = False

    def __post_init__(self):
        object.__setattr__(self, "support", tuple(sorted(self.support, key=lambda e: gkey(e[0]))))

    def at(self, g):
        for h, v in self.support:
            if h == g:
                return v
        if self.indexed:
            return Reserved(self.default.tag, g)
        return self.default

    def keys(self) -> list:
        return [g for g, _ in self.support]

    def sort_key(self):
        return (8, tuple((gkey(g), pkey(v)) for g, v in self.support), pkey(self.default), self.indexed)


@dataclass(frozen=True)
class Equivariant:
    """The map γ ↦ view(γ-action on base); evaluated lazily via ``point_at``."""
    base: Any
    action: str
    offset: tuple = ()
    ctx: Any = field(default=None, compare=True)

    def sort_key(self):
        return (9, self.action, pkey(self.base), self.offset)


@dataclass(frozen=True)
class OrbitSet:
    """The countable set {view(σ^n base) : n ∈ ℤ} of a ℤ-lasso, kept symbolic."""
    base: Any
    view: str
    ctx: Any = None

    def sort_key(self):
        return (10, self.view, pkey(self.base))


def as_point(v):
    return AtomVal(v) if isinstance(v, int) else v


def seq_default(entries: dict, default) -> SeqDefault:
    return SeqDefault(tuple(entries.items()), default)


def group_map(support: dict, default, indexed: bool = False) -> GroupMap:
    return GroupMap(tuple(support.items()), default, indexed)


# ---------------------------------------------------------------- groups

class IntGroup:
    name = "Z"
    identity = 0
    is_finite = False

    def mul(self, a, b):
        return a + b

    def inv(self, a):
        return -a

    def window(self, r: int) -> list:
        return list(range(-r, r + 1))

    def __repr__(self):
        return "Z"


class IntPowerGroup:
    is_finite = False

    def __init__(self, k: int):
        self.k = k
        self.name = f"Z^{k}"
        self.identity = (0,) * k

    def mul(self, a, b):
        return tuple(x + y for x, y in zip(a, b))

    def inv(self, a):
        return tuple(-x for x in a)

    def window(self, r: int) -> list:
        return list(itertools.product(range(-r, r + 1), repeat=self.k))

    def __repr__(self):
        return self.name


class FiniteGroup:
    is_finite = True
    identity = 0

    def __init__(self, table, name: str):
        self.table = tuple(tuple(row) for row in table)
        self.name = name
        self._inv = [next(b for b in range(len(table)) if table[a][b] == 0) for a in range(len(table))]

    @staticmethod
    def cyclic(n: int) -> "FiniteGroup":
        return FiniteGroup([[(a + b) % n for b in range(n)] for a in range(n)], f"C{n}")

    def elements(self) -> list:
        return list(range(len(self.table)))

    def mul(self, a, b):
        return self.table[a][b]

    def inv(self, a):
        return self._inv[a]

    def window(self, r: int = 0) -> list:
        return self.elements()

    def __repr__(self):
        return self.name


class Z2FinSupp:
    """ℤ₂^{<ω}: finite sets of coordinates, multiplied by symmetric difference."""
    name = "Z2fin"
    identity = frozenset()
    is_finite = False

    def mul(self, a, b):
        return frozenset(a) ^ frozenset(b)

    def inv(self, a):
        return frozenset(a)

    def window(self, r: int) -> list:
        return [frozenset(c) for k in range(r + 1) for c in itertools.combinations(range(r), k)]

    def __repr__(self):
        return self.name


Z = IntGroup()
Z2 = FiniteGroup.cyclic(2)


# ---------------------------------------------------------------- relation base

class RelDesc:
    name = "relation"
    schema = "point"
    canon_complete = True

    def __init__(self):
        self._canon_cache: dict = {}

    def decide(self, x, y) -> bool:
        if isinstance(x, Reserved) or isinstance(y, Reserved):
            return x == y
        return self._decide(x, y)

    def canon(self, x):
        if isinstance(x, Reserved):
            return x
        try:
            return self._canon_cache[x]
        except KeyError:
            c = self._canon(x)
            self._canon_cache[x] = c
            return c

    def _decide(self, x, y) -> bool:
        return self.canon(x) == self.canon(y)

    def _canon(self, x):
        raise SchemaError(f"{self.name} has no canonicalizer")

    def enumerate(self, bound: int) -> list:
        raise NotImplementedError

    def __repr__(self):
        return self.name


def _dedupe(points: Iterable) -> list:
    seen, out = set(), []
    for p in points:
        if p not in seen:
            seen.add(p)
            out.append(p)
    return out


class Delta(RelDesc):
    def __init__(self, n: int):
        super().__init__()
        self.n = n
        self.name = f"delta{n}"
        self.schema = f"atom < {n}"

    def _canon(self, x):
        x = as_point(x)
        if not isinstance(x, AtomVal):
            raise SchemaError(f"{self.name} expects an atom, got {x!r}")
        return x

    def enumerate(self, bound: int) -> list:
        return [AtomVal(i) for i in range(self.n)]


class Identity(RelDesc):
    """Equality of values; lassos are compared through their exact normal form."""
    name = "id"

    def _canon(self, x):
        if isinstance(x, LassoZ):
            return x.normal()
        if isinstance(x, LassoSeq):
            return x.normal()
        return x


def _bits(seq) -> tuple:
    return tuple(c.n if isinstance(c, AtomVal) else c for c in seq)


class E0(RelDesc):
    name = "e0"
    schema = "lassoSeq over {0,1}"

    def _canon(self, x):
        if not isinstance(x, LassoSeq):
            raise SchemaError(f"e0 expects a lassoSeq, got {x!r}")
        p = omega_normal((), x.period)[1]
        k = -(-len(x.prefix) // len(p)) * len(p)
        period = tuple(x.at(k + i) for i in range(len(p)))
        return LassoSeq((), _bits(period))

    def enumerate(self, bound: int) -> list:
        out = []
        for plen in range(bound + 1):
            for pre in itertools.product((0, 1), repeat=plen):
                for qlen in range(1, bound + 1):
                    for per in itertools.product((0, 1), repeat=qlen):
                        out.append(LassoSeq(*omega_normal(pre, per)))
        return _dedupe(out)


def complement(x):
    """Bitwise complement of a 2^ω point."""
    if isinstance(x, LassoSeq):
        return LassoSeq(tuple(1 - c for c in _bits(x.prefix)), tuple(1 - c for c in _bits(x.period)))
    if isinstance(x, AtomVal):
        return AtomVal(1 - x.n)
    if isinstance(x, int):
        return 1 - x
    raise SchemaError(f"cannot complement {x!r}")


class Product(RelDesc):
    def __init__(self, parts):
        super().__init__()
        self.parts = tuple(parts)
        self.name = "product(" + ",".join(p.name for p in self.parts) + ")"
        self.canon_complete = all(p.canon_complete for p in self.parts)

    def _check(self, x):
        if not isinstance(x, TupleVal) or len(x.items) != len(self.parts):
            raise SchemaError(f"{self.name} expects a {len(self.parts)}-tuple")

    def _decide(self, x, y):
        self._check(x)
        self._check(y)
        return all(p.decide(a, b) for p, a, b in zip(self.parts, x.items, y.items))

    def _canon(self, x):
        self._check(x)
        return TupleVal(tuple(p.canon(v) for p, v in zip(self.parts, x.items)))

    def enumerate(self, bound: int) -> list:
        return [TupleVal(t) for t in itertools.product(*(p.enumerate(bound) for p in self.parts))]


class FinSeq(RelDesc):
    """E^{<ω}: finite tuples, equivalent when of equal length and coordinatewise E."""

    def __init__(self, inner: RelDesc):
        super().__init__()
        self.inner = inner
        self.name = f"finseq({inner.name})"
        self.canon_complete = inner.canon_complete

    def _decide(self, x, y):
        if not isinstance(x, TupleVal) or not isinstance(y, TupleVal):
            raise SchemaError(f"{self.name} expects tuples")
        return len(x.items) == len(y.items) and all(
            self.inner.decide(a, b) for a, b in zip(x.items, y.items))

    def _canon(self, x):
        return TupleVal(tuple(self.inner.canon(v) for v in x.items))


class DirectSum(RelDesc):
    def __init__(self, parts):
        super().__init__()
        self.parts = tuple(parts)
        self.name = "sum(" + ",".join(p.name for p in self.parts) + ")"
        self.canon_complete = all(p.canon_complete for p in self.parts)

    def _decide(self, x, y):
        if not isinstance(x, Tagged) or not isinstance(y, Tagged):
            raise SchemaError(f"{self.name} expects tagged values")
        return x.tag == y.tag and self.parts[x.tag].decide(x.value, y.value)

    def _canon(self, x):
        return Tagged(x.tag, self.parts[x.tag].canon(x.value))

    def enumerate(self, bound: int) -> list:
        return [Tagged(i, v) for i, p in enumerate(self.parts) for v in p.enumerate(bound)]


class PowerOmega(RelDesc):
    """E^ω: sequences with finitely many exceptions (or lassos), coordinatewise E."""

    def __init__(self, inner: RelDesc):
        super().__init__()
        self.inner = inner
        self.name = f"power({inner.name})"
        self.canon_complete = inner.canon_complete

    def _decide(self, x, y):
        if isinstance(x, LassoSeq) or isinstance(y, LassoSeq):
            n = max(_seq_span(x), _seq_span(y))
            return all(self.inner.decide(as_point(x.at(i)), as_point(y.at(i))) for i in range(n))
        if not isinstance(x, SeqDefault) or not isinstance(y, SeqDefault):
            raise SchemaError(f"{self.name} expects seqDefault values")
        idx = {i for i, _ in x.entries} | {i for i, _ in y.entries}
        if not self.inner.decide(x.default, y.default):
            return False
        return all(self.inner.decide(x.at(i), y.at(i)) for i in idx)

    def _canon(self, x):
        if isinstance(x, LassoSeq):
            return LassoSeq(*omega_normal(tuple(self.inner.canon(as_point(c)) for c in x.prefix),
                                          tuple(self.inner.canon(as_point(c)) for c in x.period)))
        if not isinstance(x, SeqDefault):
            raise SchemaError(f"{self.name} expects seqDefault values")
        d = self.inner.canon(x.default)
        ent = {}
        for i, v in x.entries:
            c = self.inner.canon(v)
            if c != d:
                ent[i] = c
        return seq_default(ent, d)

    def enumerate(self, bound: int) -> list:
        vals = self.inner.enumerate(1)
        out = []
        for d in vals:
            others = [v for v in vals if v != d]
            for choice in itertools.product([None] + others, repeat=bound):
                out.append(seq_default({i: v for i, v in enumerate(choice) if v is not None}, d))
        return out


def _seq_span(x) -> int:
    if isinstance(x, LassoSeq):
        return len(x.prefix) + 2 * len(x.period)
    return max([i + 1 for i, _ in x.entries] + [0]) + 1


class Louveau(RelDesc):
    """Fréchet-filter jump: cofinitely many coordinates inner-equivalent."""

    def __init__(self, inner: RelDesc):
        super().__init__()
        self.inner = inner
        self.name = f"louveau({inner.name})"
        self.canon_complete = inner.canon_complete

    def _decide(self, x, y):
        if not isinstance(x, SeqDefault) or not isinstance(y, SeqDefault):
            raise SchemaError(f"{self.name} expects seqDefault values")
        return self.inner.decide(x.default, y.default)

    def _canon(self, x):
        return seq_default({}, self.inner.canon(x.default))

    def enumerate(self, bound: int) -> list:
        return PowerOmega(self.inner).enumerate(bound)


class FSJump(RelDesc):
    """Friedman-Stanley jump on finite sets (and symbolic orbit sets)."""

    def __init__(self, inner: RelDesc):
        super().__init__()
        self.inner = inner
        self.name = f"fs({inner.name})"
        self.canon_complete = inner.canon_complete

    def _decide(self, x, y):
        if isinstance(x, OrbitSet) or isinstance(y, OrbitSet):
            if not (isinstance(x, OrbitSet) and isinstance(y, OrbitSet)):
                return False
            return _orbit_sets_equal(self.inner, x, y)
        return self.canon(x) == self.canon(y)

    def _canon(self, x):
        if isinstance(x, OrbitSet):
            return x
        if not isinstance(x, FinSet):
            raise SchemaError(f"{self.name} expects a finite set")
        cs = {self.inner.canon(v) for v in x.elements}
        return FinSet(tuple(sorted(cs, key=pkey)))

    def enumerate(self, bound: int) -> list:
        vals = self.inner.enumerate(bound)
        return [FinSet(c) for k in range(1, min(3, len(vals)) + 1)
                for c in itertools.combinations(vals, k)]


class PowerGroup(RelDesc):
    """E^G: group maps compared at every coordinate."""

    def __init__(self, inner: RelDesc, group):
        super().__init__()
        self.inner = inner
        self.group = group
        self.name = f"pow({inner.name},{group.name})"
        self.canon_complete = inner.canon_complete

    def _decide(self, x, y):
        keys = set(x.keys()) | set(y.keys())
        if not self.group.is_finite or len(keys) < len(self.group.elements()):
            if not self.inner.decide(x.default, y.default):
                return False
        return all(self.inner.decide(x.at(g), y.at(g)) for g in keys)

    def _canon(self, x):
        d = self.inner.canon(x.default)
        sup = {g: self.inner.canon(v) for g, v in x.support}
        return group_map({g: v for g, v in sup.items() if v != d}, d)


# ---------------------------------------------------------------- evaluation

def point_at(x, g):
    """Value of a Γ-indexed point at g."""
    if isinstance(x, (LassoZ, GroupMap, SeqDefault, LassoSeq)):
        return x.at(g)
    if isinstance(x, Equivariant):
        return ACTIONS[x.action](x, g)
    raise SchemaError(f"cannot evaluate {type(x).__name__} at a group element")


def shift_groupmap(m: GroupMap, off: tuple) -> GroupMap:
    """The map v ↦ m(off + v)."""
    def sub(a, b):
        return tuple(i - j for i, j in zip(a, b))
    return GroupMap(tuple((sub(g, off), v) for g, v in m.support), m.default, m.indexed)


def _act_square(x: Equivariant, a):
    off = x.offset + (a,)
    if len(off) < 2:
        return Equivariant(x.base, x.action, off, x.ctx)
    return shift_groupmap(x.base, off)


def _act_flip(x: Equivariant, s):
    s = frozenset(s)
    base = x.base
    if isinstance(base, LassoSeq):
        n = max([len(base.prefix)] + [i + 1 for i in s])
        pre = tuple(1 - as_int(base.at(i)) if i in s else as_int(base.at(i)) for i in range(n))
        return LassoSeq(pre, _bits(rotate_period(base, n)))
    ent = dict(base.entries)
    for i in s:
        ent[i] = complement(base.at(i))
    return seq_default(ent, base.default)


def as_int(c) -> int:
    return c.n if isinstance(c, AtomVal) else c


def rotate_period(x: LassoSeq, n: int) -> tuple:
    return tuple(x.at(n + i) for i in range(len(x.period)))


def _act_free_to_pi(x: Equivariant, n: int):
    return free_to_pi_cell(x.ctx, x.base, n)


ACTIONS: dict[str, Callable] = {
    "square": _act_square,
    "flip": _act_flip,
    "free_to_pi": _act_free_to_pi,
}


# ---------------------------------------------------------------- ℤ-lasso helpers

def class_lasso(inner: RelDesc, x: LassoZ) -> LassoZ:
    return x.map(lambda c: inner.canon(as_point(c)))


def pattern_at(inner: RelDesc, x: LassoZ, n: int) -> LassoZ:
    """The class pattern of x seen from n: classes renamed by first occurrence
    in the scan order n, n+1, n-1, n+2, ... and re-anchored so n becomes 0."""
    c = class_lasso(inner, x)
    lo, hi, _ = c.extent()
    lo -= len(c.left)
    hi += len(c.right)
    names: dict = {}
    k = 0
    reach = max(abs(lo - n), abs(hi - n)) + 1
    while k <= reach:
        for pos in ((n + k,) if k == 0 else (n + k, n - k)):
            v = c.at(pos)
            if v not in names:
                names[v] = AtomVal(len(names))
        k += 1
    renamed = c.map(lambda v: names[v])
    return LassoZ(renamed.left, renamed.mid, renamed.right, renamed.origin - n).normal()


def _z_bound(*pts) -> tuple[int, int, int]:
    """Candidate-shift bound B and a window [lo, hi] covering all middles."""
    lo, hi, total, L = 0, 0, 0, 1
    for p in pts:
        if isinstance(p, Equivariant):
            p = p.base
        if isinstance(p, LassoZ):
            a, b, l = p.extent()
            lo, hi = min(lo, a), max(hi, b)
            total += b - a
            L = lcm(L, l)
        elif isinstance(p, GroupMap):
            ks = p.keys() or [0]
            lo, hi = min(lo, min(ks)), max(hi, max(ks) + 1)
            total += max(ks) - min(ks) + 1
    return total + 2 * L + (hi - lo), lo - 2 * L, hi + 2 * L


@lru_cache(maxsize=200_000)
def free_to_pi_cell(inner: RelDesc, x: LassoZ, n: int) -> TupleVal:
    """y_n = (p_n, x_n, ..., x_{n+d_n}): the class pattern at n and the run up to the next matching position."""
    p = pattern_at(inner, x, n)
    d = 0
    bound = _z_bound(x)[0]
    for k in range(1, bound + 1):
        if inner.decide(as_point(x.at(n)), as_point(x.at(n + k))) and pattern_at(inner, x, n + k) == p:
            d = k
            break
    return TupleVal((p, TupleVal(tuple(as_point(x.at(n + i)) for i in range(d + 1)))))


def _orbit_sets_equal(inner: RelDesc, x: OrbitSet, y: OrbitSet) -> bool:
    """Set equality of {view(σ^n x)} and {view(σ^m y)}.

    Every element carries the class pattern p_n, which for free lassos pins
    down n; so the sets agree iff a single alignment δ matches them all."""
    cell_rel = _orbit_cell_relation(x.ctx)
    B, lo, hi = _z_bound(x.base, y.base)
    for d in sorted(range(-B, B + 1), key=lambda v: (abs(v), -v)):
        if all(cell_rel.decide(orbit_element(x, n - d), orbit_element(y, n)) for n in range(lo - B, hi + B + 1)):
            return True
    return False


def orbit_element(s: OrbitSet, n: int):
    g = free_to_pi_cell
    a, b = g(s.ctx, s.base, n), g(s.ctx, s.base, n + 1)
    return TupleVal((a, Reserved("b"), b))


def _orbit_cell_relation(inner: RelDesc) -> RelDesc:
    cell = Product([Identity(), FinSeq(inner)])
    return Product([cell, Identity(), cell])


# ---------------------------------------------------------------- jumps

class Jump(RelDesc):
    """E^{[Γ]}: ∃γ ∀α  x(γ⁻¹α) E y(α)."""

    def __init__(self, inner: RelDesc, group):
        super().__init__()
        self.inner = inner
        self.group = group
        self.name = f"jump({inner.name},{group.name})"
        self.canon_complete = inner.canon_complete
        self.schema = "lassoZ" if isinstance(group, IntGroup) else "groupMap"

    # -- decision
    def _decide(self, x, y):
        return self.witness(x, y) is not None

    def witness(self, x, y):
        """A translate γ with γ·x coordinatewise equivalent to y, or None."""
        if isinstance(x, Equivariant) or isinstance(y, Equivariant):
            return self._witness_equivariant(x, y)
        if isinstance(self.group, IntGroup):
            if isinstance(x, LassoZ) and isinstance(y, LassoZ):
                return shift_witness(self._zcanon(x), self._zcanon(y))
            if isinstance(x, GroupMap) and isinstance(y, GroupMap) and not isinstance(x.default, GroupMap):
                return self._witness_groupmap(x, y)
            return self._witness_zwindow(x, y)
        if not isinstance(x, GroupMap) or not isinstance(y, GroupMap):
            raise SchemaError(f"{self.name} expects group maps")
        if isinstance(self.group, IntPowerGroup) and isinstance(x.default, GroupMap):
            return self._witness_curried(x, y)
        return self._witness_groupmap(x, y)

    def _zcanon(self, x: LassoZ):
        return z_shift_canon(*astuple_lasso(class_lasso(self.inner, x)), key=pkey)

    def _candidates(self, x: GroupMap, y: GroupMap) -> list:
        G = self.group
        if G.is_finite:
            return G.elements()
        if x.indexed or y.indexed:
            return [G.identity]
        xs = x.keys() + [G.identity]
        ys = y.keys() + [G.identity]
        cands = {G.mul(t, G.inv(s)) for s in xs for t in ys}
        return sorted(cands, key=gkey)

    def check_shift(self, x: GroupMap, y: GroupMap, g) -> bool:
        G = self.group
        gi = G.inv(g)
        pos = set(y.keys()) | {G.mul(g, s) for s in x.keys()}
        for a in pos:
            if not self.inner.decide(x.at(G.mul(gi, a)), y.at(a)):
                return False
        if G.is_finite and len(pos) == len(G.elements()):
            return True
        outside = _outside(G, pos)
        return self.inner.decide(x.at(G.mul(gi, outside)), y.at(outside))

    def _witness_groupmap(self, x, y):
        for g in self._candidates(x, y):
            if self.check_shift(x, y, g):
                return g
        return None

    def _witness_curried(self, x: GroupMap, y: GroupMap):
        """ℤ² points given column-wise: finitely many special columns over ℤ."""
        x, y = _trim_columns(self.inner, x), _trim_columns(self.inner, y)
        firsts = sorted({t - s for s in x.keys() + [0] for t in y.keys() + [0]})
        cols_x = [c for _, c in x.support] + [x.default]
        cols_y = [c for _, c in y.support] + [y.default]
        sx = {k for c in cols_x for k in c.keys()} | {0}
        sy = {k for c in cols_y for k in c.keys()} | {0}
        seconds = sorted({t - s for s in sx for t in sy})
        colrel = Jump(self.inner, Z)
        for g in firsts:
            rows = set(y.keys()) | {s + g for s in x.keys()}
            rows.add(_outside(Z, rows))
            for d in seconds:
                if all(colrel.check_shift(x.at(a - g), y.at(a), d) for a in rows):
                    return (g, d)
        return None

    def _witness_zwindow(self, x, y):
        B, lo, hi = _z_bound(x, y)
        for g in sorted(range(-B, B + 1), key=lambda v: (abs(v), -v)):
            if all(self.inner.decide(point_at(x, a - g), point_at(y, a))
                   for a in range(lo - B, hi + B + 1)):
                return g
        return None

    def _witness_equivariant(self, x, y):
        if not (isinstance(x, Equivariant) and isinstance(y, Equivariant)) or x.action != y.action:
            if isinstance(self.group, IntGroup):
                return self._witness_zwindow(x, y)
            return None
        if x.action == "square":
            # equivariance: the ∀α clause holds for all α iff it holds at α = 0
            k = len(x.offset)
            xs = [g[k] for g in x.base.keys()] + [0]
            ys = [g[k] for g in y.base.keys()] + [0]
            for g in sorted({t - s for s in xs for t in ys}, key=lambda v: (abs(v), -v)):
                if self.inner.decide(point_at(x, -g), point_at(y, 0)):
                    return g
            return None
        if x.action == "flip":
            n = flip_span(x.base, y.base)
            W = self.group.window(n)
            for g in W:
                if all(self.inner.decide(point_at(x, g ^ s), point_at(y, s)) for s in W):
                    return g
            return None
        return self._witness_zwindow(x, y)

    # -- canonical form
    def _canon(self, x):
        if isinstance(x, Equivariant):
            raise SchemaError(f"{self.name}: equivariant points have no canonical form")
        if isinstance(x, LassoZ):
            (l, m, r), _, _ = self._zcanon(x)
            return LassoZ(l, m, r, 0)
        if not isinstance(x, GroupMap):
            raise SchemaError(f"{self.name} expects group maps or lassos")
        if isinstance(x.default, GroupMap):
            raise SchemaError(f"{self.name}: column-wise points have no canonical form")
        G = self.group
        d = self.inner.canon(x.default) if not x.indexed else x.default
        sup = {g: self.inner.canon(v) for g, v in x.support}
        if not x.indexed:
            sup = {g: v for g, v in sup.items() if v != d}
        base = GroupMap(tuple(sup.items()), d, x.indexed)
        if x.indexed:
            return base
        if G.is_finite:
            shifts = G.elements()
        else:
            shifts = [G.inv(s) for s in sup] or [G.identity]
        best = None
        for g in shifts:
            m = GroupMap(tuple((G.mul(g, s), v) for s, v in sup.items()), d)
            if G.is_finite:
                m = GroupMap(tuple((h, m.at(h)) for h in G.elements()), d)
                m = GroupMap(tuple((h, v) for h, v in m.support if v != d), d)
            if best is None or m.sort_key() < best.sort_key():
                best = m
        return best

    # -- enumeration
    def enumerate(self, bound: int, cells: list | None = None) -> list:
        if cells is None:
            cells = _class_reps(self.inner, max(1, bound - 1))[: max(2, bound)]
        G = self.group
        if isinstance(G, IntGroup):
            return enumerate_lassos(cells, bound, bound)
        if G.is_finite:
            return _dedupe(GroupMap(tuple(zip(G.elements(), vals)), cells[0])
                           for vals in itertools.product(cells, repeat=len(G.elements())))
        sites = G.window(1)[: bound + 1]
        out = []
        for d in cells:
            for vals in itertools.product([None] + cells, repeat=len(sites)):
                out.append(GroupMap(tuple((s, v) for s, v in zip(sites, vals) if v is not None and v != d), d))
        return _dedupe(out)


def astuple_lasso(x: LassoZ) -> tuple:
    return x.left, x.mid, x.right, x.origin


def _outside(G, pos) -> Any:
    if isinstance(G, IntGroup):
        return max(pos, default=0) + 1
    if isinstance(G, IntPowerGroup):
        return (max([p[0] for p in pos], default=0) + 1,) + (0,) * (G.k - 1)
    if isinstance(G, Z2FinSupp):
        return frozenset({max([max(p, default=-1) for p in pos], default=-1) + 1})
    return next(g for g in G.elements() if g not in pos)


def _trim_columns(inner, x: GroupMap) -> GroupMap:
    colrel = PowerGroup(inner, Z)
    d = x.default
    return GroupMap(tuple((a, c) for a, c in x.support if not colrel.decide(c, d)), d)


def flip_span(*pts) -> int:
    n = 1
    for p in pts:
        if isinstance(p, SeqDefault):
            n = max(n, max([i + 1 for i, _ in p.entries], default=0) + 1)
        elif isinstance(p, LassoSeq):
            n = max(n, len(p.prefix) + len(p.period))
    if all(isinstance(p, LassoSeq) for p in pts):
        n = max(len(p.prefix) for p in pts) + reduce(lcm, [len(p.period) for p in pts], 1)
    return n


def _class_reps(rel: RelDesc, bound: int) -> list:
    seen, out = set(), []
    for v in rel.enumerate(bound):
        c = rel.canon(v)
        if c not in seen:
            seen.add(c)
            out.append(c)
    return out


def enumerate_lassos(cells: list, max_period: int, max_mid: int) -> list:
    """ℤ-lassos over ``cells``; distinct exact normal forms, origin 0."""
    words = lambda lo, hi: [w for n in range(lo, hi + 1) for w in itertools.product(cells, repeat=n)]
    out = []
    periods = words(1, max_period)
    for left in periods:
        for mid in words(0, max_mid):
            for right in periods:
                out.append(LassoZ(left, mid, right, 0).normal())
    return _dedupe(out)


def iterate_jump(inner: RelDesc, group, n: int) -> RelDesc:
    r = inner
    for _ in range(n):
        r = Jump(r, group)
    r.name = f"iter({inner.name},{group.name},{n})"
    return r


# ---------------------------------------------------------------- A-hierarchy

class ALevel2(RelDesc):
    """A_2 on (2^ω)^ω: each coordinate agrees up to E₀ or up to E₀ after a
    complement, and cofinitely many coordinates agree up to E₀."""
    name = "a2"
    schema = "seqDefault of e0 points"

    def __init__(self):
        super().__init__()
        self.e0 = E0()

    def _pair(self, v):
        a, b = self.e0.canon(v), self.e0.canon(complement(v))
        return min(a, b, key=pkey)

    def _canon(self, x):
        if not isinstance(x, SeqDefault):
            raise SchemaError("a2 expects seqDefault of lassoSeq")
        d = self.e0.canon(x.default)
        dp = self._pair(x.default)
        ent = {i: self._pair(v) for i, v in x.entries if self._pair(v) != dp}
        return seq_default(ent, d)

    def _decide(self, x, y):
        if not self.e0.decide(x.default, y.default):
            return False
        idx = {i for i, _ in x.entries} | {i for i, _ in y.entries}
        return all(self.e0.decide(x.at(i), y.at(i)) or self.e0.decide(complement(x.at(i)), y.at(i))
                   for i in idx)

    def enumerate(self, bound: int) -> list:
        vals = self.e0.enumerate(1)
        out = []
        for d in vals[:2]:
            for choice in itertools.product([None] + vals, repeat=bound):
                out.append(seq_default({i: v for i, v in enumerate(choice) if v is not None and v != d}, d))
        return _dedupe(out)


# ---------------------------------------------------------------- freeness

@dataclass(frozen=True)
class Freeness:
    free: bool
    pairwise_inequivalent: bool


def freeness(R: RelDesc, x) -> Freeness:
    if not isinstance(R, Jump):
        raise SchemaError("freeness needs a jump relation")
    G = R.group
    if isinstance(x, LassoZ):
        free = not class_lasso(R.inner, x).is_periodic()
        return Freeness(free, False)
    if isinstance(x, Equivariant) and isinstance(G, IntGroup):
        B, _, _ = _z_bound(x)
        base_free = not class_lasso(x.ctx, x.base).is_periodic()
        p0 = point_at(x, 0).items[0]
        pi = base_free and all(point_at(x, k).items[0] != p0 for k in range(1, B + 1))
        return Freeness(base_free, pi)
    if isinstance(x, GroupMap):
        if G.is_finite:
            others = [g for g in G.elements() if g != G.identity]
            free = not any(R.check_shift(x, x, g) for g in others)
            vals = [R.inner.canon(x.at(g)) for g in G.elements()]
            return Freeness(free, len(set(vals)) == len(vals))
        cands = [g for g in R._candidates(x, x) if g != G.identity]
        if not x.keys() and not x.indexed:
            return Freeness(False, False)
        free = not any(R.check_shift(x, x, g) for g in cands)
        return Freeness(free, False)
    raise SchemaError(f"freeness undefined for {type(x).__name__}")


# ---------------------------------------------------------------- jump <-> ℤ-tree

def point_to_ztree(x, n: int):
    """The ℤ-tree of a point of the n-th iterated ℤ-jump of Δ(2)."""
    from .order_trees import ZTree, LEAF_Z

    if n < 1:
        raise SchemaError("level must be at least 1")
    if not isinstance(x, LassoZ):
        raise SchemaError("expected a lassoZ point")
    if n == 1:
        cell = lambda c: LEAF_Z if as_int(c) == 1 else None
    else:
        cell = lambda c: point_to_ztree(c, n - 1)
    y = x.map(cell)
    return ZTree(y.left, y.mid, y.right, y.origin)


def zero_point(n: int) -> LassoZ:
    if n == 1:
        return LassoZ((AtomVal(0),), (), (AtomVal(0),), 0)
    return LassoZ((zero_point(n - 1),), (), (zero_point(n - 1),), 0)


def ztree_to_point(t, n: int) -> LassoZ:
    from .order_trees import tree_rank

    if tree_rank(t) > n + 1:
        raise SchemaError("tree rank exceeds the jump level")
    if n == 1:
        cell = lambda c: AtomVal(0 if c is None else 1)
    else:
        cell = lambda c: zero_point(n - 1) if c is None else ztree_to_point(c, n - 1)
    return LassoZ(tuple(map(cell, t.left)), tuple(map(cell, t.mid)), tuple(map(cell, t.right)), t.origin)


# ---------------------------------------------------------------- relation mini-language

_GROUPS = {"Z": lambda: Z, "Z2": lambda: Z2, "Z2fin": Z2FinSupp, "Z^2": lambda: IntPowerGroup(2),
           "Z^3": lambda: IntPowerGroup(3), "C3": lambda: FiniteGroup.cyclic(3),
           "C4": lambda: FiniteGroup.cyclic(4)}


def parse_group(s: str):
    s = s.strip()
    if s in _GROUPS:
        return _GROUPS[s]()
    m = re.fullmatch(r"C(\d+)", s)
    if m:
        return FiniteGroup.cyclic(int(m.group(1)))
    raise SchemaError(f"unknown group {s!r}")


def _split_args(s: str) -> list[str]:
    out, depth, cur = [], 0, ""
    for ch in s:
        if ch == "," and depth == 0:
            out.append(cur)
            cur = ""
            continue
        depth += ch == "("
        depth -= ch == ")"
        cur += ch
    out.append(cur)
    return [a.strip() for a in out]


def make_relation(spec: str) -> RelDesc:
    """Build a relation from the mini-language, e.g. ``jump(e0,Z)`` or ``iter(delta2,Z,2)``."""
    spec = spec.strip()
    m = re.fullmatch(r"delta\(?(\d+)\)?", spec)
    if m:
        return Delta(int(m.group(1)))
    if spec in ("e0", "e0()"):
        return E0()
    if spec in ("a2", "a(2)"):
        return ALevel2()
    if spec == "id":
        return Identity()
    m = re.fullmatch(r"(\w+)\((.*)\)", spec)
    if not m:
        raise SchemaError(f"cannot parse relation {spec!r}")
    head, args = m.group(1), _split_args(m.group(2))
    if head == "jump" and len(args) == 2:
        inner = make_relation(args[0])
        if not inner.canon_complete:
            raise SchemaError("jump needs an inner relation with complete canonical forms")
        return Jump(inner, parse_group(args[1]))
    if head == "iter" and len(args) == 3:
        return iterate_jump(make_relation(args[0]), parse_group(args[1]), int(args[2]))
    if head == "fs" and len(args) == 1:
        return FSJump(make_relation(args[0]))
    if head == "louveau" and len(args) == 1:
        return Louveau(make_relation(args[0]))
    if head == "power" and len(args) == 1:
        return PowerOmega(make_relation(args[0]))
    if head == "finseq" and len(args) == 1:
        return FinSeq(make_relation(args[0]))
    if head == "product":
        return Product([make_relation(a) for a in args])
    if head == "sum":
        return DirectSum([make_relation(a) for a in args])
    if head == "pow" and len(args) == 2:
        return PowerGroup(make_relation(args[0]), parse_group(args[1]))
    raise SchemaError(f"unsupported relation constructor {spec!r}")


def rel_decide(R: RelDesc, x, y) -> bool:
    return R.decide(x, y)


# ---------------------------------------------------------------- JSON

def to_json(v):
    if isinstance(v, AtomVal):
        return v.n
    if isinstance(v, int):
        return v
    if v is None:
        return None
    if isinstance(v, Reserved):
        return {"reserved": v.tag, "index": _gjson(v.index)}
    if isinstance(v, TupleVal):
        return {"tuple": [to_json(x) for x in v.items]}
    if isinstance(v, Tagged):
        return {"tagged": [v.tag, to_json(v.value)]}
    if isinstance(v, SeqDefault):
        return {"seqDefault": {"entries": {str(i): to_json(x) for i, x in v.entries},
                               "default": to_json(v.default)}}
    if isinstance(v, LassoSeq):
        return {"lassoSeq": {"prefix": [to_json(x) for x in v.prefix],
                             "period": [to_json(x) for x in v.period]}}
    if isinstance(v, LassoZ):
        return {"lassoZ": {"left": [to_json(x) for x in v.left], "mid": [to_json(x) for x in v.mid],
                           "right": [to_json(x) for x in v.right], "origin": v.origin}}
    if isinstance(v, FinSet):
        return {"finSet": [to_json(x) for x in v.elements]}
    if isinstance(v, GroupMap):
        return {"groupMap": {"support": [[_gjson(g), to_json(x)] for g, x in v.support],
                             "default": to_json(v.default), "indexed": v.indexed}}
    if isinstance(v, Equivariant):
        return {"equivariant": {"action": v.action, "base": to_json(v.base), "offset": list(v.offset)}}
    if isinstance(v, OrbitSet):
        return {"orbitSet": {"view": v.view, "base": to_json(v.base)}}
    raise SchemaError(f"cannot encode {v!r}")


def _gjson(g):
    if isinstance(g, frozenset):
        return {"bits": sorted(g)}
    if isinstance(g, tuple):
        return list(g)
    return g


def _gfrom(g):
    if isinstance(g, dict):
        return frozenset(g["bits"])
    if isinstance(g, list):
        return tuple(g)
    return g


def from_json(j):
    if isinstance(j, bool):
        raise SchemaError("booleans are not points")
    if isinstance(j, int):
        return AtomVal(j)
    if j is None:
        return None
    if not isinstance(j, dict) or len(j) < 1:
        raise SchemaError(f"bad point encoding {j!r}")
    if "reserved" in j:
        return Reserved(j["reserved"], _gfrom(j.get("index")))
    (k, b), = [(k, b) for k, b in j.items() if k != "index"]
    if k == "tuple":
        return TupleVal(tuple(from_json(x) for x in b))
    if k == "tagged":
        return Tagged(b[0], from_json(b[1]))
    if k == "seqDefault":
        return SeqDefault(tuple((int(i), from_json(x)) for i, x in b.get("entries", {}).items()),
                          from_json(b["default"]))
    if k == "lassoSeq":
        return LassoSeq(tuple(as_int(from_json(x)) for x in b.get("prefix", [])),
                        tuple(as_int(from_json(x)) for x in b["period"]))
    if k == "lassoZ":
        return LassoZ(tuple(from_json(x) for x in b["left"]), tuple(from_json(x) for x in b.get("mid", [])),
                      tuple(from_json(x) for x in b["right"]), int(b.get("origin", 0)))
    if k == "finSet":
        return FinSet(tuple(from_json(x) for x in b))
    if k == "groupMap":
        return GroupMap(tuple((_gfrom(g), from_json(x)) for g, x in b["support"]),
                        from_json(b["default"]), bool(b.get("indexed", False)))
    raise SchemaError(f"unknown point kind {k!r}")

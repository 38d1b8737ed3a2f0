"""Terms for regular scattered linear orders.

A term is built from the empty order, labelled points, finite chains, sums and
the three repetitions ω·A, ω*·A and ζ·A.  The central tool is the labelled
condensation: the quotient of an order by "finitely many points in between".
Each condensation class of a regular order is a word of rank at most one
(finite, ω-word, ω*-word or ℤ-word over the point labels), so classes get an
exact canonical presentation, and the quotient is again a term whose letters
are those classes.  Canonicalizing the quotient recursively and substituting
the class terms back gives a normal form that is complete for isomorphism.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Any, Callable, Iterator, Union

from .words import omega_normal, omega_star_normal, z_shift_canon

DEFAULT = "1"


class OrderError(ValueError):
    """Raised for operations undefined on the given order (e.g. rank of 0)."""


class ParseError(ValueError):
    def __init__(self, msg: str, pos: int):
        super().__init__(f"{msg} at position {pos}")
        self.pos = pos


def label_key(label: Any) -> tuple:
    if isinstance(label, str):
        return (0, label)
    return (1, label.sort_key())


# ---------------------------------------------------------------- term types

@dataclass(frozen=True)
class Zero:
    def sort_key(self) -> tuple:
        return (0,)


@dataclass(frozen=True)
class Atom:
    label: Any = DEFAULT

    def sort_key(self) -> tuple:
        return (1, label_key(self.label))


@dataclass(frozen=True)
class Fin:
    n: int

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("Fin needs n >= 2")

    def sort_key(self) -> tuple:
        return (2, self.n)


@dataclass(frozen=True)
class Sum:
    parts: tuple

    def __post_init__(self):
        object.__setattr__(self, "parts", tuple(self.parts))
        if len(self.parts) < 2:
            raise ValueError("Sum needs at least two parts")

    def sort_key(self) -> tuple:
        return (3, tuple(p.sort_key() for p in self.parts))


@dataclass(frozen=True)
class OmegaRep:
    body: Any

    def sort_key(self) -> tuple:
        return (4, self.body.sort_key())


@dataclass(frozen=True)
class OmegaStarRep:
    body: Any

    def sort_key(self) -> tuple:
        return (5, self.body.sort_key())


@dataclass(frozen=True)
class ZetaRep:
    body: Any

    def sort_key(self) -> tuple:
        return (6, self.body.sort_key())


OrderTerm = Union[Zero, Atom, Fin, Sum, OmegaRep, OmegaStarRep, ZetaRep]
ZERO = Zero()
ONE = Atom()
REPS = (OmegaRep, OmegaStarRep, ZetaRep)


def fin(n: int) -> OrderTerm:
    if n == 0:
        return ZERO
    if n == 1:
        return ONE
    return Fin(n)


def make_sum(parts) -> OrderTerm:
    """Flatten, drop zeros and coalesce neighbouring unlabelled chains."""
    flat: list = []
    for q in _flatten(parts):
        n = _plain_size(q)
        if n and flat and _plain_size(flat[-1]):
            flat[-1] = fin(_plain_size(flat[-1]) + n)
        else:
            flat.append(q)
    if not flat:
        return ZERO
    if len(flat) == 1:
        return flat[0]
    return Sum(tuple(flat))


def _flatten(parts):
    for p in parts:
        if isinstance(p, Sum):
            yield from _flatten(p.parts)
        elif not isinstance(p, Zero):
            yield p


def _plain_size(t) -> int:
    if isinstance(t, Fin):
        return t.n
    if isinstance(t, Atom) and t.label == DEFAULT:
        return 1
    return 0


def size(t: OrderTerm) -> int:
    """Structural size: points count singly, repetitions add one."""
    if isinstance(t, (Zero, Atom)):
        return 1
    if isinstance(t, Fin):
        return t.n
    if isinstance(t, Sum):
        return sum(size(p) for p in t.parts)
    return 1 + size(t.body)


def is_repetition_free(t: OrderTerm) -> bool:
    if isinstance(t, REPS):
        return False
    if isinstance(t, Sum):
        return all(is_repetition_free(p) for p in t.parts)
    return True


def cardinality(t: OrderTerm) -> int:
    if isinstance(t, Zero):
        return 0
    if isinstance(t, Atom):
        return 1
    if isinstance(t, Fin):
        return t.n
    if isinstance(t, Sum):
        return sum(cardinality(p) for p in t.parts)
    raise OrderError("infinite order has no finite cardinality")


def map_labels(t: OrderTerm, fn: Callable[[Any], OrderTerm]) -> OrderTerm:
    """Substitute every atom by ``fn(label)``; default chains are kept."""
    if isinstance(t, Atom):
        return fn(t.label)
    if isinstance(t, (Zero, Fin)):
        return t
    if isinstance(t, Sum):
        return make_sum(map_labels(p, fn) for p in t.parts)
    return type(t)(map_labels(t.body, fn))


def erase_labels(t: OrderTerm) -> OrderTerm:
    return map_labels(t, lambda _: ONE)


def labels(t: OrderTerm) -> set:
    if isinstance(t, Atom):
        return {t.label}
    if isinstance(t, Fin):
        return {DEFAULT}
    if isinstance(t, Zero):
        return set()
    if isinstance(t, Sum):
        out = set()
        for p in t.parts:
            out |= labels(p)
        return out
    return labels(t.body)


# ---------------------------------------------------------------- parsing

_TOKEN = re.compile(r"\s*(?:(?P<int>\d+)|(?P<kw>ws\(|w\(|z\(|atom\()|(?P<sym>[+)])|(?P<neg>-\d+))")
_IDENT = re.compile(r"\s*([A-Za-z_][A-Za-z0-9_.-]*)\s*\)")


def parse_term(text: str) -> OrderTerm:
    pos = 0
    n = len(text)

    def peek():
        m = _TOKEN.match(text, pos)
        if not m:
            if text[pos:].strip():
                raise ParseError("unexpected character", pos + len(text[pos:]) - len(text[pos:].lstrip()))
            return None
        return m

    def term():
        nonlocal pos
        parts = [primary()]
        while True:
            m = peek()
            if m and m.group("sym") == "+":
                pos = m.end()
                parts.append(primary())
            else:
                break
        if len(parts) == 1:
            return parts[0]
        return Sum(tuple(parts))

    def primary():
        nonlocal pos
        m = peek()
        if m is None:
            raise ParseError("unexpected end of input", n)
        start = m.start() + len(m.group(0)) - len(m.group(0).lstrip())
        if m.group("neg"):
            raise ParseError("integer literal < 0", start)
        if m.group("int"):
            pos = m.end()
            return fin(int(m.group("int")))
        kw = m.group("kw")
        if kw:
            pos = m.end()
            if kw == "atom(":
                mi = _IDENT.match(text, pos)
                if not mi:
                    raise ParseError("expected identifier", pos)
                pos = mi.end()
                return Atom(mi.group(1))
            body = term()
            close = peek()
            if not close or close.group("sym") != ")":
                raise ParseError("expected ')'", pos)
            pos = close.end()
            return {"w(": OmegaRep, "ws(": OmegaStarRep, "z(": ZetaRep}[kw](body)
        raise ParseError("expected a term", start)

    t = term()
    if text[pos:].strip():
        raise ParseError("trailing input", pos + len(text[pos:]) - len(text[pos:].lstrip()))
    return t


def render_term(t: OrderTerm, label_fn: Callable[[Any], str] | None = None) -> str:
    """Render in the input grammar, writing ζ for adjacent ω*·A + ω·A."""
    if isinstance(t, Zero):
        return "0"
    if isinstance(t, Atom):
        if t.label == DEFAULT:
            return "1"
        name = label_fn(t.label) if label_fn else str(t.label)
        return f"atom({name})"
    if isinstance(t, Fin):
        return str(t.n)
    if isinstance(t, Sum):
        out = []
        parts = list(t.parts)
        i = 0
        while i < len(parts):
            p = parts[i]
            if (isinstance(p, OmegaStarRep) and i + 1 < len(parts)
                    and isinstance(parts[i + 1], OmegaRep) and parts[i + 1].body == p.body):
                out.append(f"z({render_term(p.body, label_fn)})")
                i += 2
                continue
            out.append(render_term(p, label_fn))
            i += 1
        return "+".join(out)
    head = {OmegaRep: "w", OmegaStarRep: "ws", ZetaRep: "z"}[type(t)]
    return f"{head}({render_term(t.body, label_fn)})"


# ---------------------------------------------------------------- end flags

@dataclass(frozen=True)
class EndFlags:
    is_empty: bool
    has_min: bool
    has_max: bool
    finite_size: int | None


def end_flags(t: OrderTerm) -> EndFlags:
    lo, hi = _ends(t)
    empty = _is_empty(t)
    size_ = cardinality(t) if is_repetition_free(t) else None
    return EndFlags(empty, lo, hi, size_)


def _is_empty(t) -> bool:
    if isinstance(t, Zero):
        return True
    if isinstance(t, Sum):
        return all(_is_empty(p) for p in t.parts)
    if isinstance(t, REPS):
        return _is_empty(t.body)
    return False


def _ends(t) -> tuple[bool, bool]:
    if isinstance(t, Zero):
        return False, False
    if isinstance(t, (Atom, Fin)):
        return True, True
    if isinstance(t, Sum):
        parts = [p for p in t.parts if not _is_empty(p)]
        if not parts:
            return False, False
        return _ends(parts[0])[0], _ends(parts[-1])[1]
    if _is_empty(t.body):
        return False, False
    lo, hi = _ends(t.body)
    if isinstance(t, OmegaRep):
        return lo, False
    if isinstance(t, OmegaStarRep):
        return False, hi
    return False, False


def has_min(t) -> bool:
    return _ends(t)[0]


def has_max(t) -> bool:
    return _ends(t)[1]


# ---------------------------------------------------------------- condensation

@dataclass(frozen=True)
class ClassWord:
    """One condensation class: a word of rank at most one over point labels.

    ``left`` is the period of a left-infinite tail (None if the class has a
    least point); ``right`` likewise on the right.  Instances are always
    normalized, so equal classes are equal objects.
    """
    left: tuple | None
    mid: tuple
    right: tuple | None

    @staticmethod
    def make(left, mid, right) -> "ClassWord":
        mid = tuple(mid)
        if left is None and right is None:
            return ClassWord(None, mid, None)
        if left is None:
            u, v = omega_normal(mid, right)
            return ClassWord(None, u, v)
        if right is None:
            p, u = omega_star_normal(left, mid)
            return ClassWord(p, u, None)
        (p, u, q), _, _ = z_shift_canon(left, mid, right, 0, key=label_key)
        return ClassWord(p, u, q)

    @property
    def has_min(self) -> bool:
        return self.left is None

    @property
    def has_max(self) -> bool:
        return self.right is None

    @property
    def is_finite(self) -> bool:
        return self.left is None and self.right is None

    @property
    def is_point(self) -> bool:
        return self.is_finite and len(self.mid) == 1

    def concat(self, other: "ClassWord") -> "ClassWord":
        assert self.has_max and other.has_min
        return ClassWord.make(self.left, self.mid + other.mid, other.right)

    def sort_key(self) -> tuple:
        def k(w):
            return () if w is None else tuple(label_key(c) for c in w)
        return (7, self.left is not None, k(self.left), k(self.mid),
                self.right is not None, k(self.right))


@dataclass(frozen=True)
class One:
    c: ClassWord


@dataclass(frozen=True)
class Many:
    first: ClassWord | None
    mid: Any
    last: ClassWord | None


EMPTY = None


def _items(d) -> list:
    if d is EMPTY:
        return []
    if isinstance(d, One):
        return [d.c]
    out = []
    if d.first is not None:
        out.append(d.first)
    if not isinstance(d.mid, Zero):
        out.append(d.mid)
    if d.last is not None:
        out.append(d.last)
    return out


def _as_term(items) -> OrderTerm:
    return make_sum(Atom(x) if isinstance(x, ClassWord) else x for x in items)


def _mk(items):
    items = [x for x in items if not isinstance(x, Zero)]
    if not items:
        return EMPTY
    if len(items) == 1 and isinstance(items[0], ClassWord):
        return One(items[0])
    first = last = None
    if isinstance(items[0], ClassWord) and items[0].has_min:
        first = items.pop(0)
    if items and isinstance(items[-1], ClassWord) and items[-1].has_max:
        last = items.pop()
    return Many(first, _as_term(items), last)


def _combine(a, b):
    ia, ib = _items(a), _items(b)
    if not ia:
        return b
    if not ib:
        return a
    x, y = ia[-1], ib[0]
    if isinstance(x, ClassWord) and isinstance(y, ClassWord) and x.has_max and y.has_min:
        return _mk(ia[:-1] + [x.concat(y)] + ib[1:])
    return _mk(ia + ib)


def _omega(d):
    if d is EMPTY:
        return EMPTY
    if isinstance(d, One) and d.c.is_finite:
        return One(ClassWord.make(None, (), d.c.mid))
    items = _items(d)
    f, l = items[0], items[-1]
    f_min = isinstance(f, ClassWord) and f.has_min
    l_max = isinstance(l, ClassWord) and l.has_max
    if f_min and l_max:
        # consecutive copies fuse at the junction l + f
        m = items[1:-1]
        return _mk([f] + m + [OmegaRep(make_sum([Atom(l.concat(f))] + [_as_term(m)]))])
    block = _as_term(items)
    if f_min:
        return _mk(items + [OmegaRep(block)])
    return _mk([OmegaRep(block)])


def _omega_star(d):
    if d is EMPTY:
        return EMPTY
    if isinstance(d, One) and d.c.is_finite:
        return One(ClassWord.make(d.c.mid, (), None))
    items = _items(d)
    f, l = items[0], items[-1]
    f_min = isinstance(f, ClassWord) and f.has_min
    l_max = isinstance(l, ClassWord) and l.has_max
    if f_min and l_max:
        m = items[1:-1]
        return _mk([OmegaStarRep(make_sum([_as_term(m), Atom(l.concat(f))]))] + m + [l])
    block = _as_term(items)
    if l_max:
        return _mk([OmegaStarRep(block)] + items)
    return _mk([OmegaStarRep(block)])


@lru_cache(maxsize=None)
def condense(t: OrderTerm):
    """Labelled condensation: EMPTY, One(class) or Many(first, mid, last)."""
    if isinstance(t, Zero):
        return EMPTY
    if isinstance(t, Atom):
        return One(ClassWord(None, (t.label,), None))
    if isinstance(t, Fin):
        return One(ClassWord(None, (DEFAULT,) * t.n, None))
    if isinstance(t, Sum):
        d = EMPTY
        for p in t.parts:
            d = _combine(d, condense(p))
        return d
    inner = condense(t.body)
    if isinstance(t, OmegaRep):
        return _omega(inner)
    if isinstance(t, OmegaStarRep):
        return _omega_star(inner)
    return _combine(_omega_star(inner), _omega(inner))


def quotient(t: OrderTerm) -> OrderTerm:
    """The condensation L/∼ as a term whose atoms are labelled by ClassWords."""
    return _as_term(_items(condense(t)))


def word_term(letters) -> OrderTerm:
    return make_sum(Atom(c) for c in letters)


def class_term(c: ClassWord) -> OrderTerm:
    parts = []
    if c.left is not None:
        parts.append(OmegaStarRep(word_term(c.left)))
    parts.append(word_term(c.mid))
    if c.right is not None:
        parts.append(OmegaRep(word_term(c.right)))
    return make_sum(parts)


# ---------------------------------------------------------------- canonical form

@lru_cache(maxsize=None)
def canonicalize(t: OrderTerm) -> OrderTerm:
    """Complete normal form: isomorphic terms get identical results.

    ζ never appears in the output; ``render_term`` re-sugars it for display.
    """
    d = condense(t)
    if d is EMPTY:
        return ZERO
    if isinstance(d, One):
        return class_term(d.c)
    q = canonicalize(_as_term(_items(d)))
    return map_labels(q, class_term)


def is_point(t: OrderTerm) -> bool:
    d = condense(t)
    return isinstance(d, One) and d.c.is_point


def rank(t: OrderTerm) -> int:
    if _is_empty(t):
        raise OrderError("rank of the empty order is undefined")
    r = 0
    while not is_point(t):
        t = quotient(t)
        r += 1
    return r


def derivative(t: OrderTerm) -> OrderTerm:
    """Canonical term for L/∼ (class labels erased)."""
    return canonicalize(erase_labels(quotient(t)))


def drop_min(t: OrderTerm) -> OrderTerm:
    if isinstance(t, Atom):
        return ZERO
    if isinstance(t, Fin):
        return fin(t.n - 1)
    if isinstance(t, Sum):
        parts = [p for p in t.parts if not _is_empty(p)]
        if parts:
            return make_sum([drop_min(parts[0])] + parts[1:])
    if isinstance(t, OmegaRep) and not _is_empty(t.body):
        return make_sum([drop_min(t.body), t])
    raise OrderError("order has no least element")


# ---------------------------------------------------------------- completion

def complete_hull(t: OrderTerm) -> OrderTerm:
    if isinstance(t, (Zero, Atom, Fin)):
        return t
    if isinstance(t, Sum):
        hulls = [complete_hull(p) for p in t.parts if not _is_empty(p)]
        out: list = []
        for h in hulls:
            if out and not has_max(out[-1]) and not has_min(h):
                out.append(ONE)
            out.append(h)
        return make_sum(out)
    h = complete_hull(t.body)
    if _is_empty(h):
        return ZERO
    gap = not has_max(h) and not has_min(h)
    if isinstance(t, OmegaRep):
        return OmegaRep(make_sum([h, ONE]) if gap else h)
    if isinstance(t, OmegaStarRep):
        return OmegaStarRep(make_sum([ONE, h]) if gap else h)
    return ZetaRep(make_sum([h, ONE]) if gap else h)


def is_complete(t: OrderTerm) -> bool:
    v = iso_terms(complete_hull(t), t)
    if isinstance(v, Unknown):
        raise OrderError("completeness indeterminate")
    return isinstance(v, Isomorphic)


# ---------------------------------------------------------------- isomorphism

@dataclass(frozen=True)
class Isomorphic:
    canonical: Any


@dataclass(frozen=True)
class NonIsomorphic:
    invariant: str
    left: Any
    right: Any


@dataclass(frozen=True)
class Unknown:
    pass


IsoVerdict = Union[Isomorphic, NonIsomorphic, Unknown]


def derivative_signature(t: OrderTerm) -> tuple:
    """End flags of the successive derivatives down to a point."""
    out = []
    while not _is_empty(t) and not is_point(t):
        t = quotient(t)
        lo, hi = _ends(t)
        out.append((lo, hi))
    return tuple(out)


def iso_terms(a: OrderTerm, b: OrderTerm) -> IsoVerdict:
    from .oracles import invariant_signature

    ca, cb = canonicalize(a), canonicalize(b)
    if ca == cb:
        return Isomorphic(ca)
    fa, fb = end_flags(a), end_flags(b)
    if fa.is_empty != fb.is_empty:
        return NonIsomorphic("is_empty", fa.is_empty, fb.is_empty)
    ra, rb = rank(a), rank(b)
    if ra != rb:
        return NonIsomorphic("rank", ra, rb)
    if fa.has_min != fb.has_min:
        return NonIsomorphic("has_min", fa.has_min, fb.has_min)
    if fa.has_max != fb.has_max:
        return NonIsomorphic("has_max", fa.has_max, fb.has_max)
    if fa.finite_size != fb.finite_size:
        return NonIsomorphic("finite_size", fa.finite_size, fb.finite_size)
    da, db = derivative_signature(a), derivative_signature(b)
    if da != db:
        return NonIsomorphic("derivative_signature", da, db)
    sa, sb = invariant_signature(a), invariant_signature(b)
    if sa != sb:
        return NonIsomorphic("invariant_signature", sa, sb)
    # the normal form is complete, so distinct forms certify non-isomorphism
    return NonIsomorphic("normal_form", render_term(ca), render_term(cb))


# ---------------------------------------------------------------- rewrite rules

def _rule_zeta_expand(t):
    if isinstance(t, ZetaRep):
        yield Sum((OmegaStarRep(t.body), OmegaRep(t.body)))


def _rule_flatten(t):
    if isinstance(t, Sum) and any(isinstance(p, (Sum, Zero)) for p in t.parts):
        parts = []
        for p in t.parts:
            if isinstance(p, Sum):
                parts.extend(p.parts)
            elif not isinstance(p, Zero):
                parts.append(p)
        yield parts[0] if len(parts) == 1 else (Sum(tuple(parts)) if parts else ZERO)


def _rule_coalesce(t):
    if isinstance(t, Sum):
        ps = t.parts
        for i in range(len(ps) - 1):
            a, b = _plain_size(ps[i]), _plain_size(ps[i + 1])
            if a and b:
                rest = ps[:i] + (fin(a + b),) + ps[i + 2:]
                yield rest[0] if len(rest) == 1 else Sum(rest)


def _rule_absorb(t):
    if isinstance(t, Sum):
        ps = t.parts
        for i in range(len(ps) - 1):
            a, b = ps[i], ps[i + 1]
            hit = (isinstance(b, OmegaRep) and b.body == a) or (isinstance(a, OmegaStarRep) and a.body == b)
            if hit:
                keep = b if isinstance(b, OmegaRep) and b.body == a else a
                rest = ps[:i] + (keep,) + ps[i + 2:]
                yield rest[0] if len(rest) == 1 else Sum(rest)


def _blocks(body) -> list:
    if isinstance(body, Fin):
        return [ONE]
    if not isinstance(body, Sum):
        return []
    ps = body.parts
    out = []
    for p in range(1, len(ps)):
        if len(ps) % p == 0 and p < len(ps) and ps[:p] * (len(ps) // p) == ps:
            out.append(ps[0] if p == 1 else Sum(ps[:p]))
    return out


def _rule_power(t):
    if isinstance(t, REPS):
        for b in _blocks(t.body):
            yield type(t)(b)


def _rule_rotate(t):
    if isinstance(t, OmegaRep) and isinstance(t.body, Sum):
        ps = t.body.parts
        for i in range(1, len(ps)):
            head = ps[:i]
            rot = ps[i:] + head
            yield Sum(head + (OmegaRep(Sum(rot)),))
    if isinstance(t, OmegaStarRep) and isinstance(t.body, Sum):
        ps = t.body.parts
        for i in range(1, len(ps)):
            tail = ps[i:]
            rot = tail + ps[:i]
            yield Sum((OmegaStarRep(Sum(rot)),) + tail)


def _rule_zero_body(t):
    if isinstance(t, REPS) and isinstance(t.body, Zero):
        yield ZERO


def _rule_unroll(t):
    if isinstance(t, OmegaRep):
        yield Sum((t.body, t))
    if isinstance(t, OmegaStarRep):
        yield Sum((t, t.body))


RULES = {
    "zeta_expand": _rule_zeta_expand,
    "flatten": _rule_flatten,
    "coalesce": _rule_coalesce,
    "absorb": _rule_absorb,
    "power": _rule_power,
    "rotate": _rule_rotate,
    "zero_body": _rule_zero_body,
    "unroll": _rule_unroll,
}


def _subterms(t, path=()) -> Iterator[tuple]:
    yield path, t
    if isinstance(t, Sum):
        for i, p in enumerate(t.parts):
            yield from _subterms(p, path + (i,))
    elif isinstance(t, REPS):
        yield from _subterms(t.body, path + (0,))


def _replace(t, path, new):
    if not path:
        return new
    i = path[0]
    if isinstance(t, Sum):
        parts = list(t.parts)
        parts[i] = _replace(parts[i], path[1:], new)
        return Sum(tuple(parts))
    return type(t)(_replace(t.body, path[1:], new))


def rewrites(t: OrderTerm) -> Iterator[tuple[str, tuple, OrderTerm]]:
    """All single-rule rewrites of ``t``: (rule name, redex path, result)."""
    for path, sub in _subterms(t):
        for name, rule in RULES.items():
            for new in rule(sub):
                yield name, path, _replace(t, path, new)

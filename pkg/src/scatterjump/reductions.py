"""Executable reduction maps between jump relations, with a brute verification harness.

Each catalog entry bundles source and target relations, the map, a finite
source fragment to check it on, and optional per-pair cross-checks (bounded
window evaluation, freeness of images).
"""
from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field
from typing import Any, Callable

from . import relations as rl
from .oracles import window_eval
from .relations import (AtomVal, Delta, DirectSum, E0, Equivariant, FinSeq, FinSet, FiniteGroup,
                        FSJump, GroupMap, Identity, IntPowerGroup, Jump, LassoSeq, LassoZ, OrbitSet,
                        PowerGroup, PowerOmega, Product, RelDesc, RepresentabilityError, Reserved,
                        SchemaError, Tagged, TupleVal, Z, Z2, Z2FinSupp, class_lasso,
                        enumerate_lassos, flip_span, group_map, iterate_jump, seq_default)


class CatalogError(ValueError):
    pass


@dataclass
class Reduction:
    name: str
    source: RelDesc
    target: RelDesc
    map: Callable[[Any], Any]
    provenance: str
    points: Callable[[int], list]
    bound: int
    max_bound: int
    cross_check: Callable | None = None
    finite_map: Callable | None = None


@dataclass
class VerifyReport:
    name: str
    pairs_checked: int
    forward_failures: list = field(default_factory=list)
    backward_failures: list = field(default_factory=list)
    cross_check_failures: list = field(default_factory=list)
    positives: int = 0
    elapsed: float = 0.0

    @property
    def ok(self) -> bool:
        return not (self.forward_failures or self.backward_failures or self.cross_check_failures)

    def to_json(self, timing: bool = True) -> dict:
        enc = lambda pairs: [[rl.to_json(a), rl.to_json(b)] for a, b in pairs]
        out = {
            "name": self.name,
            "pairs": self.pairs_checked,
            "positives": self.positives,
            "failures": enc(self.forward_failures + self.backward_failures),
            "forward_failures": enc(self.forward_failures),
            "backward_failures": enc(self.backward_failures),
            "cross_check_failures": enc(self.cross_check_failures),
        }
        if timing:
            out["elapsed"] = round(self.elapsed, 3)
        return out


# ---------------------------------------------------------------- shared pieces

A = Reserved("a")
D2 = Delta(2)


def gap_set(n: int) -> list[int]:
    """First n elements of S = {0, 2, 5, 9, 14, ...}; gaps grow by one, so γ+S ≠ S for γ ≠ 0."""
    out, s = [], 0
    for k in range(n):
        out.append(s)
        s += k + 2
    return out


def delta_enum(n: int) -> int:
    """δ_n in the enumeration 0, 1, -1, 2, -2, ... of ℤ."""
    return (n + 1) // 2 if n % 2 else -(n // 2)


def least_period(inner: RelDesc, x: LassoZ) -> int | None:
    c = class_lasso(inner, x)
    l, _, _, _, periodic = rl.z_normal(c.left, c.mid, c.right, c.origin)
    return len(l) if periodic else None


def _lassos(cells, max_period, max_mid, keep=None) -> list:
    pts = enumerate_lassos(cells, max_period, max_mid)
    return [p for p in pts if keep is None or keep(p)]


def _e0_cells() -> list:
    # two E0 classes, the first with two distinct representatives
    return [LassoSeq((), (0,)), LassoSeq((1,), (0,)), LassoSeq((), (1,))]


def _inner(params) -> RelDesc:
    name = params.get("inner", "e0")
    if name == "e0":
        return E0()
    if name == "delta2":
        return D2
    raise CatalogError(f"unsupported inner relation {name!r}")


def _inner_cells(inner: RelDesc) -> list:
    return _e0_cells() if isinstance(inner, E0) else [AtomVal(0), AtomVal(1)]


# ---------------------------------------------------------------- catalog

def _r_power_into_jump(params) -> Reduction:
    src = PowerOmega(D2)
    tgt = Jump(D2, Z)
    W = int(params.get("window", 5))
    S = gap_set(W + 1)

    def f(x):
        # coordinate W carries the default, which every enumerated point keeps from W on
        return group_map({S[i]: x.at(i) for i in range(W + 1)}, A)

    return Reduction("r_power_into_jump", src, tgt, f,
                     "E^ω ≤ E^[ℤ] via f(x)(s_n) = x(n) on a rigid set S, a elsewhere",
                     lambda b: _with_explicit_defaults(src.enumerate(min(b, W))), W, W)


def _with_explicit_defaults(pts: list) -> list:
    # same sequences written with the default spelled out at coordinate 0
    extra = [seq_default({0: x.default, **dict(x.entries)}, x.default) for x in pts if 0 not in dict(x.entries)]
    return pts + extra


def _r_subgroup(params) -> Reduction:
    src = Jump(D2, Z)
    tgt = Jump(D2, Z)

    def f(x):
        spread = lambda w: tuple(v for c in w for v in (c, A))
        return LassoZ(spread(x.left), spread(x.mid), spread(x.right), 2 * x.origin)

    return Reduction("r_subgroup", src, tgt, f,
                     "E^[Λ] ≤ E^[ℤ] for Λ = 2ℤ: copy x onto Λ and pad the odd positions with a",
                     lambda b: _lassos([AtomVal(0), AtomVal(1)], b, b), 2, 4)


def _r_quotient(params) -> Reduction:
    G = FiniteGroup.cyclic(3)
    src = Jump(Delta(4), G)
    tgt = Jump(Delta(4), Z)

    def f(x):
        per = tuple(x.at(g) for g in G.elements())
        return LassoZ(per, (), per, 0)

    return Reduction("r_quotient", src, tgt, f,
                     "E^[C3] ≤ E^[ℤ] through the quotient ℤ → C3: f(x) = x ∘ π",
                     lambda b: src.enumerate(b), 4, 4)


_SQUARE_SITES = [(0, 0), (0, 1), (1, 0), (1, 1), (0, 2)]


def _r_gamma_square(params) -> Reduction:
    G2 = IntPowerGroup(2)
    src = Jump(D2, G2)
    tgt = Jump(Jump(PowerGroup(D2, G2), Z), Z)
    radius = int(params.get("radius", 2))

    def points(b):
        sites = _SQUARE_SITES[:b]
        out = []
        for d in (0, 1):
            for vals in itertools.product((None, 1 - d), repeat=len(sites)):
                out.append(group_map({s: AtomVal(v) for s, v in zip(sites, vals) if v is not None},
                                     AtomVal(d)))
        return out

    def f(x):
        return Equivariant(x, "square")

    def cross(x, y, fx, fy, decided):
        return window_eval(tgt, fx, fy, radius=radius) == decided

    return Reduction("r_gamma_square", src, tgt, f,
                     "E^[Γ²] ≤ J²_Γ(E^Γ²): φ(x)(α)(β) is x translated by (α, β)",
                     points, 5, 5, cross)


def _r_absorb_power(params) -> Reduction:
    src = Jump(PowerOmega(D2), Z)
    tgt = Jump(D2, IntPowerGroup(2))

    zero, one = seq_default({}, AtomVal(0)), seq_default({}, AtomVal(1))
    pool = [zero, one, seq_default({0: AtomVal(1)}, AtomVal(0)), seq_default({1: AtomVal(0)}, AtomVal(1)),
            seq_default({0: AtomVal(1), 1: AtomVal(1)}, AtomVal(0))]

    def column(v):
        sup = {delta_enum(0): A}
        for i, c in v.entries:
            sup[delta_enum(i + 1)] = c
        return group_map(sup, v.default)

    def f(x):
        return group_map({g: column(v) for g, v in x.support}, column(x.default))

    def points(b):
        sites = list(range(b))
        out = []
        for d in (zero, one):
            others = [v for v in pool if v != d]
            for vals in itertools.product([None] + others, repeat=len(sites)):
                out.append(group_map({s: v for s, v in zip(sites, vals) if v is not None}, d))
        return out

    return Reduction("r_absorb_power", src, tgt, f,
                     "(E^ω)^[ℤ] ≤ E^[ℤ×ℤ]: row δ_0 holds a, row δ_(n+1) holds coordinate n",
                     points, 2, 2)


def _r_free_to_pi(params) -> Reduction:
    inner = _inner({"inner": params.get("inner", "delta2")})
    src = Jump(inner, Z)
    tgt = Jump(Product([Identity(), FinSeq(inner)]), Z)

    def f(x):
        return Equivariant(x, "free_to_pi", ctx=inner)

    def points(b):
        return _lassos(_inner_cells(inner), 2, b, keep=lambda p: least_period(inner, p) is None)

    def cross(x, y, fx, fy, decided):
        return rl.freeness(tgt, fx).pairwise_inequivalent and rl.freeness(tgt, fy).pairwise_inequivalent

    return Reduction("r_free_to_pi", src, tgt, f,
                     "free part of E^[ℤ] to the pairwise inequivalent part of (Δ × E^<ω)^[ℤ]: "
                     "y_n = (p_n, x_n, ..., x_(n+d_n))", points, 3, 5, cross)


def _r_zjump_to_fs(params) -> Reduction:
    inner = _inner(params)
    src = Jump(inner, Z)
    tgt = FSJump(FinSeq(inner))

    def f(x):
        k = least_period(inner, x)
        if k is None:
            return OrbitSet(x, "free_to_pi", ctx=inner)
        return FinSet(tuple(TupleVal((A,) + tuple(rl.as_point(x.at(i + j)) for j in range(k)))
                            for i in range(k)))

    def finite(x):
        v = f(x)
        if isinstance(v, OrbitSet):
            raise RepresentabilityError("aperiodic input: the image is an infinite set of orbit views")
        return v

    mid = 2 if isinstance(inner, E0) else 3
    return Reduction("r_zjump_to_fs", src, tgt, f,
                     "E^[ℤ] ≤ (E^<ω)^+: periodic x ↦ {(a, x_i, ..., x_(i+k-1))}, "
                     "aperiodic x ↦ {g(x)_n b g(x)_(n+1)}",
                     lambda b: _lassos(_inner_cells(inner), 1 if isinstance(inner, E0) else 2, b),
                     mid, mid + 1, finite_map=finite)


class PiCells(RelDesc):
    """Cells of the pairwise-inequivalent target: free-part cells or a hashed class value."""
    name = "picells(e0)"

    def __init__(self, inner: RelDesc):
        super().__init__()
        self.inner = inner
        self.cell = Product([Identity(), FinSeq(inner)])

    def _decide(self, x, y):
        if isinstance(x, TupleVal) and isinstance(y, TupleVal):
            return self.cell.decide(x, y)
        if isinstance(x, Tagged) and isinstance(y, Tagged):
            return x == y
        return False

    def _canon(self, x):
        return self.cell.canon(x) if isinstance(x, TupleVal) else x


def _r_z2_pi(params) -> Reduction:
    inner = E0()
    src = Jump(inner, Z)
    tgt = Jump(PiCells(inner), Z)
    cls = FSJump(FinSeq(inner))

    def h(x, k):
        words = FinSet(tuple(TupleVal(tuple(x.at(i + j) for j in range(k))) for i in range(k)))
        return Tagged(0, cls.canon(words))

    def f(x):
        k = least_period(inner, x)
        if k is None:
            return Equivariant(x, "free_to_pi", ctx=inner)
        return GroupMap(((0, h(x, k)),), A, indexed=True)

    return Reduction("r_z2_pi", src, tgt, f,
                     "E0^[ℤ] ≤ E0^[ℤ] restricted to pairwise inequivalent points: free part as in "
                     "the free-part map, periodic part coded at 0 among reserved letters a_n",
                     lambda b: _lassos(_e0_cells(), 1, b), 2, 3)


def _jz_pools():
    j1 = [LassoZ((AtomVal(0),), (AtomVal(1),), (AtomVal(0),), 0),
          LassoZ((AtomVal(0),), (AtomVal(1),), (AtomVal(0),), 3),
          LassoZ((AtomVal(0),), (AtomVal(1), AtomVal(1)), (AtomVal(0),), 0),
          LassoZ((AtomVal(0), AtomVal(1)), (), (AtomVal(0), AtomVal(1)), 0)]
    z1 = rl.zero_point(1)
    j2 = [LassoZ((z1,), (j1[0],), (z1,), 0),
          LassoZ((z1,), (j1[1],), (z1,), 5),
          LassoZ((z1,), (j1[2],), (z1,), 0),
          LassoZ((z1,), (j1[0], j1[2]), (z1,), 0),
          LassoZ((z1,), (j1[2], j1[0]), (z1,), 0)]
    return j1, j2


def _r_limit_to_product(params) -> Reduction:
    levels = [iterate_jump(D2, Z, n) if n else D2 for n in range(3)]
    src = Product(levels)
    tgt = Jump(DirectSum(levels), Z)
    pad = Reserved("pad")
    j1, j2 = _jz_pools()

    def f(x):
        return group_map({delta_enum(n): Tagged(n, v) for n, v in enumerate(x.items)}, pad)

    def points(b):
        return [TupleVal(t) for t in itertools.product([AtomVal(0), AtomVal(1)], j1[:b], j2[:b + 1])]

    return Reduction("r_limit_to_product", src, tgt, f,
                     "∏_(n<3) J^n ≤ (⊕_(n<3) J^n)^[ℤ]: f(x)(γ_n) = x(n), padded with a reserved letter",
                     points, 4, 4)


def _dcc_pools(N: int) -> list:
    pools = [[AtomVal(0), AtomVal(1)]]
    for _ in range(1, N):
        a, b = pools[-1][0], pools[-1][1]
        pair = lambda u, v: group_map({0: u, 1: v}, u)
        pools.append([pair(a, b), pair(b, a), pair(b, b)])
    return pools


def _r_dcc_phi(params) -> Reduction:
    N = int(params.get("truncation", params.get("bound", 3)))
    if N < 1:
        raise CatalogError("truncation must be at least 1")
    G = Z2
    levels = [iterate_jump(D2, G, n) if n else D2 for n in range(N)]
    src = Jump(Product(levels), G)
    tgt = Product([Jump(Product(levels[:n]), G) for n in range(1, N + 1)])
    cap = int(params.get("pool", 12))
    tuples = [TupleVal(t) for t in itertools.islice(itertools.product(*_dcc_pools(N)), cap)]

    def f(x):
        cut = lambda v, n: TupleVal(v.items[:n])
        return TupleVal(tuple(GroupMap(tuple((g, cut(x.at(g), n)) for g in G.elements()), cut(x.default, n))
                              for n in range(1, N + 1)))

    def points(b):
        return [GroupMap(((0, u), (1, v)), u) for u in tuples for v in tuples]

    return Reduction("r_dcc_phi", src, tgt, f,
                     "(∏_n J^n)^[Γ] ≤ ∏_n (∏_(k<n) J^k)^[Γ] over a group with the descending chain "
                     "condition: φ(x)(n)(γ) = x(γ)↾n, truncated at N levels",
                     points, N, N)


def _r_a_step(params) -> Reduction:
    level = int(params.get("level", 2))
    G = Z2FinSupp()
    if level == 1:
        src = E0()
        tgt = Jump(PowerOmega(D2), G)
        pts = lambda b: src.enumerate(b)
    elif level == 2:
        src = rl.ALevel2()
        tgt = Jump(PowerOmega(E0()), G)
        pts = lambda b: src.enumerate(b)
    else:
        raise CatalogError("r_a_step is implemented for levels 1 and 2")

    def f(x):
        return Equivariant(x, "flip")

    def cross(x, y, fx, fy, decided):
        if not decided:
            return True
        W = G.window(flip_span(x, y))
        return window_eval(tgt, fx, fy, window=W)

    return Reduction("r_a_step", src, tgt, f,
                     f"A_{level} ≤ ((A_{level - 1})^ω)^[ℤ2^<ω]: α_x(s) flips the coordinates in s",
                     pts, 3, 3, cross)


CATALOG: dict[str, Callable[[dict], Reduction]] = {
    "r_power_into_jump": _r_power_into_jump,
    "r_subgroup": _r_subgroup,
    "r_quotient": _r_quotient,
    "r_gamma_square": _r_gamma_square,
    "r_absorb_power": _r_absorb_power,
    "r_free_to_pi": _r_free_to_pi,
    "r_zjump_to_fs": _r_zjump_to_fs,
    "r_z2_pi": _r_z2_pi,
    "r_limit_to_product": _r_limit_to_product,
    "r_dcc_phi": _r_dcc_phi,
    "r_a_step": _r_a_step,
}


def catalog_reduction(name: str, params: dict | None = None) -> Reduction:
    if name not in CATALOG:
        raise CatalogError(f"unknown reduction {name!r}; known: {', '.join(CATALOG)}")
    return CATALOG[name](dict(params or {}))


def apply_reduction(r: Reduction, x, finite: bool = False):
    """``r.map(x)`` canonicalized in the target where a canonical form exists."""
    v = r.finite_map(x) if finite and r.finite_map else r.map(x)
    try:
        return r.target.canon(v)
    except SchemaError:
        return v


def mutate(r: Reduction, points: list) -> Reduction:
    """A corrupted copy whose map ignores its input."""
    pinned = points[0]
    return Reduction(r.name + "_mutant", r.source, r.target, lambda x: r.map(pinned),
                     r.provenance, r.points, r.bound, r.max_bound)


def verify_reduction(r: Reduction, bound: int | None = None, points: list | None = None) -> VerifyReport:
    """Check x E y ⇔ f(x) F f(y) on all unordered pairs of distinct enumerated points."""
    t0 = time.perf_counter()
    if bound is None:
        bound = r.bound
    if bound > r.max_bound:
        raise CatalogError(f"bound {bound} exceeds the declared maximum {r.max_bound} for {r.name}")
    pts = points if points is not None else r.points(bound)
    imgs = [r.map(x) for x in pts]
    rep = VerifyReport(r.name, 0)
    for i, j in itertools.combinations(range(len(pts)), 2):
        x, y, fx, fy = pts[i], pts[j], imgs[i], imgs[j]
        s = r.source.decide(x, y)
        t = r.target.decide(fx, fy)
        rep.pairs_checked += 1
        rep.positives += s
        if s and not t:
            rep.forward_failures.append((x, y))
        if t and not s:
            rep.backward_failures.append((x, y))
        if r.cross_check and not r.cross_check(x, y, fx, fy, t):
            rep.cross_check_failures.append((x, y))
    rep.elapsed = time.perf_counter() - t0
    return rep

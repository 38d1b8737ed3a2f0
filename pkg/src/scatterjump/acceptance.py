"""The ten acceptance checks, shared by ``tests/test_acceptance.py`` and ``cli selftest``.

Each check returns a ``Result``; nothing here asserts, so a failing criterion
is reported with its counterexamples instead of stopping the run.
"""
from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass, field

from . import order_terms as ot
from . import order_trees as tr
from . import relations as rl
from . import reductions as rd
from .oracles import (brute_shift_equiv, enumerate_finite_terms, enumerate_terms,
                      invariant_signature)


@dataclass
class SuiteConfig:
    term_size: int = 7
    rewrite_samples: int = 1200
    rewrite_term_size: int = 6
    tree_rank: int = 4
    tree_pool: int = 10
    lasso_period: int = 2
    lasso_mid: int = 3
    seed: int = 2024


@dataclass
class Result:
    number: int
    title: str
    passed: bool
    detail: str
    examples: list = field(default_factory=list)
    elapsed: float = 0.0

    def line(self) -> str:
        flag = "PASS" if self.passed else "FAIL"
        return f"[{flag}] {self.number:>2}. {self.title}: {self.detail} ({self.elapsed:.1f}s)"


def _timed(fn):
    def run(cfg: SuiteConfig | None = None) -> Result:
        t0 = time.perf_counter()
        res = fn(cfg or SuiteConfig())
        res.elapsed = time.perf_counter() - t0
        return res
    run.__name__ = fn.__name__
    run.__doc__ = fn.__doc__
    return run


@_timed
def rank_derivative(cfg: SuiteConfig) -> Result:
    """Derivative chains reach a point within size steps; rank and end flags survive canonicalization."""
    t0 = time.perf_counter()
    bad, n = [], 0
    for t in enumerate_terms(cfg.term_size):
        if ot._is_empty(t):
            continue
        n += 1
        steps, cur = 0, t
        while cur != ot.ONE and steps <= ot.size(t):
            cur = ot.derivative(cur)
            steps += 1
        c = ot.canonicalize(t)
        if cur != ot.ONE or ot.rank(c) != ot.rank(t) or ot.end_flags(c) != ot.end_flags(t):
            bad.append(ot.render_term(t))
    spent = time.perf_counter() - t0
    ok = not bad and spent < 60 and n >= 1000
    return Result(1, "rank/derivative consistency", ok,
                  f"{n} nonempty terms of size <= {cfg.term_size}, {len(bad)} violations, {spent:.1f}s of 60s",
                  bad[:5])


@_timed
def rewrite_soundness(cfg: SuiteConfig) -> Result:
    """Sampled single-rule rewrites keep invariant_signature."""
    rng = random.Random(cfg.seed)
    terms = [t for t in enumerate_terms(cfg.rewrite_term_size) if not ot._is_empty(t)]
    done, bad, rules = 0, [], set()
    tries = 0
    while done < cfg.rewrite_samples and tries < 50 * cfg.rewrite_samples:
        tries += 1
        t = rng.choice(terms)
        options = list(ot.rewrites(t))
        if not options:
            continue
        name, path, new = rng.choice(options)
        rules.add(name)
        done += 1
        if invariant_signature(new) != invariant_signature(t):
            bad.append((name, ot.render_term(t), ot.render_term(new)))
    ok = done >= 1000 and not bad
    return Result(2, "rewrite soundness", ok,
                  f"{done} rewrites over rules {sorted(rules)}, {len(bad)} violations", bad[:5])


@_timed
def finite_oracle(cfg: SuiteConfig) -> Result:
    """On repetition-free terms, isomorphism holds exactly when cardinalities agree."""
    by_canon: dict = {}
    by_card: dict = {}
    reps: dict = {}
    n = 0
    for t in enumerate_finite_terms(cfg.term_size):
        n += 1
        c, k = ot.canonicalize(t), ot.cardinality(t)
        by_canon.setdefault(c, set()).add(k)
        by_card.setdefault(k, set()).add(c)
        reps.setdefault(k, []).append(t)
    bad = [ot.render_term(c) for c, ks in by_canon.items() if len(ks) > 1]
    bad += [f"size {k}" for k, cs in by_card.items() if len(cs) > 1]
    # direct iso_terms calls on a sample of pairs, as a second path
    rng = random.Random(cfg.seed)
    flat = [t for ts in reps.values() for t in rng.sample(ts, min(len(ts), 40))]
    checked = 0
    for a, b in itertools.combinations(flat, 2):
        checked += 1
        iso = isinstance(ot.iso_terms(a, b), ot.Isomorphic)
        if iso != (ot.cardinality(a) == ot.cardinality(b)):
            bad.append((ot.render_term(a), ot.render_term(b)))
    return Result(3, "finite-order oracle", not bad,
                  f"{n} repetition-free terms in {len(by_canon)} classes, {checked} direct iso pairs, "
                  f"{len(bad)} disagreements", bad[:5])


@_timed
def reduction_catalog(cfg: SuiteConfig) -> Result:
    """Every catalog reduction verifies on at least 500 pairs; a corrupted map is caught."""
    t0 = time.perf_counter()
    parts, bad = [], []
    for name in rd.CATALOG:
        r = rd.catalog_reduction(name)
        rep = rd.verify_reduction(r)
        parts.append(f"{name}={rep.pairs_checked}")
        if not rep.ok or rep.pairs_checked < 500:
            bad.append((name, rep.pairs_checked, len(rep.forward_failures), len(rep.backward_failures),
                        len(rep.cross_check_failures)))
    spent = time.perf_counter() - t0
    r = rd.catalog_reduction("r_subgroup")
    pts = r.points(r.bound)
    mrep = rd.verify_reduction(rd.mutate(r, pts), points=pts)
    mutant_caught = bool(mrep.forward_failures or mrep.backward_failures)
    ok = not bad and spent < 120 and mutant_caught
    return Result(4, "reduction catalog", ok,
                  f"{len(parts)} reductions ({', '.join(parts)}), {len(bad)} failing, {spent:.1f}s of 120s, "
                  f"mutant failures {len(mrep.forward_failures) + len(mrep.backward_failures)}", bad)


def tree_suite(cfg: SuiteConfig) -> list:
    return tr.enumerate_regtrees(cfg.tree_rank, cfg.tree_pool)


def separator_provenance(T) -> bool:
    """In every node's encoding the only singleton condensation class is the separator middle."""
    if T.is_leaf:
        return True
    q = ot.quotient(tr.tree_to_order(T, annotate=True))
    singles = [lab for lab in ot.labels(q) if lab.is_point]
    if singles != [ot.ClassWord(None, (tr.SEP_MARK,), None)]:
        return False
    if _singleton_count(q) != 1:
        return False
    return all(separator_provenance(tr._sub(lab)) for lab in ot.labels(T.children))


def _singleton_count(q, rep: bool = False):
    if isinstance(q, ot.Atom):
        return (2 if rep else 1) if q.label.is_point else 0
    if isinstance(q, ot.Sum):
        return sum(_singleton_count(p, rep) for p in q.parts)
    if isinstance(q, ot.REPS):
        return _singleton_count(q.body, True)
    return 0


@_timed
def tree_round_trip(cfg: SuiteConfig) -> Result:
    """Encode trees as orders, decode back; check rank bookkeeping and separator provenance."""
    trees = tree_suite(cfg)
    trip, rank_bad, sep_bad = [], [], []
    for T in trees:
        L = tr.tree_to_order(T, complete=False)
        if not tr.tree_iso(tr.decode_order(L), T):
            trip.append(T)
        for complete in (False, True):
            E = tr.tree_to_order(T, complete=complete)
            if ot.rank(E) + 1 != tr.tree_rank(T):
                rank_bad.append((tr.tree_rank(T), ot.rank(E), complete))
        if not separator_provenance(T):
            sep_bad.append(T)
    ok = len(trees) >= 200 and not trip and not rank_bad and not sep_bad
    return Result(5, "tree/order round trip", ok,
                  f"{len(trees)} trees of rank <= {cfg.tree_rank}: round trip failures {len(trip)}, "
                  f"rank bookkeeping violations {len(rank_bad)} of {2 * len(trees)}, "
                  f"separator provenance failures {len(sep_bad)}",
                  [("tree_rank, rank(order), complete", x) for x in rank_bad[:5]])


@_timed
def completeness_variant(cfg: SuiteConfig) -> Result:
    """The complete encoding is Dedekind complete for every tree in the suite."""
    trees = tree_suite(cfg)
    bad, unknown = [], 0
    for T in trees:
        E = tr.tree_to_order(T, complete=True)
        v = ot.iso_terms(ot.complete_hull(E), E)
        if isinstance(v, ot.Unknown):
            unknown += 1
        elif not isinstance(v, ot.Isomorphic):
            bad.append(ot.render_term(E))
    return Result(6, "completeness variant", not bad and not unknown,
                  f"{len(trees)} trees, {len(bad)} incomplete, {unknown} indeterminate", bad[:3])


def level2_points() -> list:
    z = rl.AtomVal(0)
    o = rl.AtomVal(1)
    cells = [rl.zero_point(1),
             rl.LassoZ((z,), (o,), (z,), 0),
             rl.LassoZ((z,), (o,), (z,), 2),
             rl.LassoZ((z,), (o, o), (z,), 0),
             rl.LassoZ((z, o), (), (z, o), 0)]
    return rl.enumerate_lassos(cells, 1, 2)


@_timed
def jump_tree(cfg: SuiteConfig) -> Result:
    """Level-2 iterated ℤ-jump of Δ(2) agrees with ℤ-tree isomorphism."""
    R = rl.iterate_jump(rl.Delta(2), rl.Z, 2)
    pts = level2_points()
    trees = [rl.point_to_ztree(x, 2) for x in pts]
    bad, n, pos = [], 0, 0
    for i, j in itertools.combinations(range(len(pts)), 2):
        n += 1
        a = rl.rel_decide(R, pts[i], pts[j])
        pos += a
        if a != tr.tree_iso(trees[i], trees[j]):
            bad.append((rl.to_json(pts[i]), rl.to_json(pts[j])))
    return Result(7, "jump/tree correspondence", n >= 500 and not bad,
                  f"{n} pairs ({pos} equivalent), {len(bad)} disagreements", bad[:3])


@_timed
def shift_oracle(cfg: SuiteConfig) -> Result:
    """Canonical ℤ-jump decisions agree with the brute shift scan, witnesses included."""
    R = rl.Jump(rl.Delta(2), rl.Z)
    pts = rl.enumerate_lassos([rl.AtomVal(0), rl.AtomVal(1)], cfg.lasso_period, cfg.lasso_mid)
    # the canonical normal forms all sit at origin 0; add translates so witnesses are nontrivial
    pts = pts + [rl.LassoZ(p.left, p.mid, p.right, p.origin + 3) for p in pts[::7]]
    bad, n, pos = [], 0, 0
    for x, y in itertools.combinations(pts, 2):
        n += 1
        w = R.witness(x, y)
        b = brute_shift_equiv(x, y)
        pos += w is not None
        if (w is None) != (b is None) or w != b:
            bad.append((rl.to_json(x), rl.to_json(y), w, b))
    return Result(8, "shift-decision oracle", not bad,
                  f"{len(pts)} lassos (period <= {cfg.lasso_period}, middle <= {cfg.lasso_mid}), {n} pairs "
                  f"({pos} equivalent), {len(bad)} disagreements", bad[:3])


@_timed
def dcc_map(cfg: SuiteConfig) -> Result:
    """The truncation map over ℤ₂ is a reduction at truncation 3."""
    r = rd.catalog_reduction("r_dcc_phi", {"truncation": 3})
    rep = rd.verify_reduction(r, 3)
    return Result(9, "DCC map", rep.ok and rep.pairs_checked > 0,
                  f"{rep.pairs_checked} pairs ({rep.positives} equivalent), forward failures "
                  f"{len(rep.forward_failures)}, backward failures {len(rep.backward_failures)}")


@_timed
def a_step(cfg: SuiteConfig) -> Result:
    """A_2 reduces to ((E0)^ω)^[ℤ2^<ω] by flip-coding, with window checks on positives."""
    r = rd.catalog_reduction("r_a_step", {"level": 2})
    rep = rd.verify_reduction(r)
    ok = rep.ok and rep.pairs_checked >= 200 and rep.positives > 0
    return Result(10, "A-hierarchy step", ok,
                  f"{rep.pairs_checked} pairs, {rep.positives} positives window-checked, "
                  f"failures fwd {len(rep.forward_failures)} / bwd {len(rep.backward_failures)} / "
                  f"window {len(rep.cross_check_failures)}")


CRITERIA = [rank_derivative, rewrite_soundness, finite_oracle, reduction_catalog, tree_round_trip,
            completeness_variant, jump_tree, shift_oracle, dcc_map, a_step]


def run_all(cfg: SuiteConfig | None = None, echo=print) -> list[Result]:
    out = []
    for check in CRITERIA:
        res = check(cfg)
        if echo:
            echo(res.line())
        out.append(res)
    return out

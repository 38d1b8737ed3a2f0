"""Command-line front end.

Exit codes: 0 success or affirmative, 1 negative verdict, 2 indeterminate,
3 usage or parse error, 4 representability error.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass

from . import order_terms as ot
from . import order_trees as tr
from . import relations as rl
from . import reductions as rd

OK, NEGATIVE, UNKNOWN, USAGE, UNREPRESENTABLE = 0, 1, 2, 3, 4


@dataclass
class CliConfig:
    term_cap: int = 9
    oracle_bound: int = 3
    format: str = "text"
    seed: int = 2024

    def __post_init__(self):
        if self.term_cap <= 0 or self.oracle_bound <= 0:
            raise ValueError("bounds must be positive")
        if self.format not in ("text", "json"):
            raise ValueError("format must be text or json")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _emit(cfg: CliConfig, text: str, data) -> None:
    if cfg.format == "json":
        print(json.dumps(data, sort_keys=True, ensure_ascii=False))
    else:
        print(text)


def _load_json(arg: str):
    """A JSON value given inline, as a file path, or as '-' for stdin."""
    if arg == "-":
        return json.load(sys.stdin)
    s = arg.strip()
    if s[:1] in "{[-0123456789" or s in ("null", "true", "false"):
        return json.loads(s)
    with open(arg, encoding="utf-8") as fh:
        return json.load(fh)


def _verdict_json(v) -> dict:
    if isinstance(v, ot.Isomorphic):
        return {"verdict": "Isomorphic", "canonical": ot.render_term(v.canonical)}
    if isinstance(v, ot.NonIsomorphic):
        return {"verdict": "NonIsomorphic", "invariant": v.invariant,
                "left": str(v.left), "right": str(v.right)}
    return {"verdict": "Unknown"}


# ---------------------------------------------------------------- commands

def cmd_canon(a, cfg):
    c = ot.canonicalize(ot.parse_term(a.term))
    _emit(cfg, ot.render_term(c), {"canonical": ot.render_term(c)})
    return OK


def cmd_rank(a, cfg):
    r = ot.rank(ot.parse_term(a.term))
    _emit(cfg, str(r), {"rank": r})
    return OK


def cmd_derive(a, cfg):
    t = ot.parse_term(a.term)
    chain = []
    for _ in range(a.steps):
        t = ot.derivative(t)
        chain.append(ot.render_term(t))
    _emit(cfg, "\n".join(chain), {"derivatives": chain})
    return OK


def cmd_iso(a, cfg):
    v = ot.iso_terms(ot.parse_term(a.left), ot.parse_term(a.right))
    j = _verdict_json(v)
    if isinstance(v, ot.Isomorphic):
        text = f"Isomorphic {j['canonical']}"
    elif isinstance(v, ot.NonIsomorphic):
        text = f"NonIsomorphic {v.invariant}: {j['left']} vs {j['right']}"
    else:
        text = "Unknown"
    _emit(cfg, text, j)
    return {ot.Isomorphic: OK, ot.NonIsomorphic: NEGATIVE}.get(type(v), UNKNOWN)


def cmd_complete(a, cfg):
    t = ot.parse_term(a.term)
    if a.mode == "hull":
        h = ot.render_term(ot.complete_hull(t))
        _emit(cfg, h, {"hull": h})
        return OK
    v = ot.iso_terms(ot.complete_hull(t), t)
    if isinstance(v, ot.Unknown):
        _emit(cfg, "Unknown", {"complete": None})
        return UNKNOWN
    ok = isinstance(v, ot.Isomorphic)
    _emit(cfg, str(ok).lower(), {"complete": ok})
    return OK if ok else NEGATIVE


def cmd_order2tree(a, cfg):
    t = ot.parse_term(a.term)
    T = tr.decode_order(t) if a.decode else tr.order_to_tree(t)
    j = tr.regtree_to_json(tr.tree_canon(T))
    print(json.dumps(j, sort_keys=True, ensure_ascii=False))
    return OK


def cmd_tree2order(a, cfg):
    T = tr.regtree_from_json(_load_json(a.tree))
    L = tr.tree_to_order(T, complete=a.complete)
    text = ot.render_term(L)
    _emit(cfg, text, {"order": text, "rank": ot.rank(L)})
    return OK


def cmd_rel(a, cfg):
    R = rl.make_relation(a.spec)
    if a.action == "eval":
        if len(a.points) != 2:
            raise UsageError("rel eval needs two points")
        x, y = (rl.from_json(_load_json(p)) for p in a.points)
        v = rl.rel_decide(R, x, y)
        _emit(cfg, str(v).lower(), {"relation": R.name, "equivalent": v})
        return OK if v else NEGATIVE
    if len(a.points) != 1:
        raise UsageError("rel canon needs one point")
    c = rl.to_json(R.canon(rl.from_json(_load_json(a.points[0]))))
    print(json.dumps(c, sort_keys=True, ensure_ascii=False))
    return OK


def _params(pairs) -> dict:
    out = {}
    for p in pairs or []:
        k, _, v = p.partition("=")
        if not _:
            raise UsageError(f"parameter {p!r} is not key=value")
        out[k] = int(v) if v.lstrip("-").isdigit() else v
    return out


def cmd_reduce(a, cfg):
    r = rd.catalog_reduction(a.name, _params(a.param))
    x = rl.from_json(_load_json(a.point))
    v = rd.apply_reduction(r, x, finite=a.finite)
    print(json.dumps(rl.to_json(v), sort_keys=True, ensure_ascii=False))
    return OK


def cmd_verify(a, cfg):
    params = _params(a.param)
    if a.name == "r_dcc_phi" and a.bound is not None:
        params.setdefault("truncation", a.bound)
    r = rd.catalog_reduction(a.name, params)
    rep = rd.verify_reduction(r, a.bound)
    print(json.dumps(rep.to_json(timing=a.timing), sort_keys=True, ensure_ascii=False))
    return OK if rep.ok else NEGATIVE


def cmd_enumerate(a, cfg):
    from .oracles import enumerate_terms
    terms = [ot.render_term(t) for t in enumerate_terms(a.size, cap=cfg.term_cap)]
    if a.count:
        _emit(cfg, str(len(terms)), {"size": a.size, "count": len(terms)})
    else:
        _emit(cfg, "\n".join(terms), {"size": a.size, "terms": terms})
    return OK


def cmd_selftest(a, cfg):
    from .acceptance import SuiteConfig, run_all
    res = run_all(SuiteConfig(seed=cfg.seed), echo=print if cfg.format == "text" else None)
    if cfg.format == "json":
        print(json.dumps([{"criterion": r.number, "title": r.title, "passed": r.passed,
                           "detail": r.detail} for r in res], sort_keys=True, ensure_ascii=False))
    return OK if all(r.passed for r in res) else NEGATIVE


def cmd_report(a, cfg):
    from .report import write_report
    paths = write_report(a.out, size=a.size, names=a.reductions or None)
    _emit(cfg, "\n".join(paths), {"files": paths})
    return OK


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="scatterjump", description="Scattered order terms, order trees and Γ-jump relations.")
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.add_argument("--seed", type=int, default=2024)
    p.add_argument("--term-cap", type=int, default=9, help="largest term size enumerate accepts")
    p.add_argument("--oracle-bound", type=int, default=3)
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    s = sub.add_parser("canon", help="canonical form of a term")
    s.add_argument("term")
    s.set_defaults(fn=cmd_canon)
    s = sub.add_parser("rank", help="condensation rank of a term")
    s.add_argument("term")
    s.set_defaults(fn=cmd_rank)
    s = sub.add_parser("derive", help="iterated derivative")
    s.add_argument("term")
    s.add_argument("--steps", type=int, default=1)
    s.set_defaults(fn=cmd_derive)
    s = sub.add_parser("iso", help="decide isomorphism of two terms")
    s.add_argument("left")
    s.add_argument("right")
    s.set_defaults(fn=cmd_iso)
    s = sub.add_parser("complete", help="Dedekind completeness check or hull")
    s.add_argument("mode", choices=["check", "hull"])
    s.add_argument("term")
    s.set_defaults(fn=cmd_complete)
    s = sub.add_parser("order2tree", help="condensation tree of an order (JSON)")
    s.add_argument("term")
    s.add_argument("--decode", action="store_true", help="invert tree2order instead")
    s.set_defaults(fn=cmd_order2tree)
    s = sub.add_parser("tree2order", help="encode a tree (JSON file, inline or '-') as an order")
    s.add_argument("tree")
    s.add_argument("--complete", action="store_true")
    s.set_defaults(fn=cmd_tree2order)
    s = sub.add_parser("rel", help="evaluate or canonicalize points of a relation")
    s.add_argument("action", choices=["eval", "canon"])
    s.add_argument("spec")
    s.add_argument("points", nargs="+")
    s.set_defaults(fn=cmd_rel)
    s = sub.add_parser("reduce", help="apply a catalog reduction to a point")
    s.add_argument("name")
    s.add_argument("point")
    s.add_argument("--param", action="append", metavar="KEY=VALUE")
    s.add_argument("--finite", action="store_true", help="refuse images without a finite presentation")
    s.set_defaults(fn=cmd_reduce)
    s = sub.add_parser("verify", help="verify a catalog reduction on its enumerated fragment")
    s.add_argument("name")
    s.add_argument("--bound", type=int)
    s.add_argument("--param", action="append", metavar="KEY=VALUE")
    s.add_argument("--timing", action="store_true", help="include elapsed seconds")
    s.set_defaults(fn=cmd_verify)
    s = sub.add_parser("enumerate", help="list terms up to a size")
    s.add_argument("--size", type=int, default=3)
    s.add_argument("--count", action="store_true")
    s.set_defaults(fn=cmd_enumerate)
    s = sub.add_parser("selftest", help="run the acceptance suite")
    s.set_defaults(fn=cmd_selftest)
    s = sub.add_parser("report", help="write census and verification tables plus a figure")
    s.add_argument("--out", default="report")
    s.add_argument("--size", type=int, default=6)
    s.add_argument("--reductions", nargs="*")
    s.set_defaults(fn=cmd_report)
    return p


def run_cli(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        a = build_parser().parse_args(argv)
        cfg = CliConfig(a.term_cap, a.oracle_bound, a.format, a.seed)
        return a.fn(a, cfg)
    except rl.RepresentabilityError as e:
        print(f"error: {e}", file=sys.stderr)
        return UNREPRESENTABLE
    except (UsageError, ot.ParseError, ot.OrderError, rl.SchemaError, tr.TreeError, rd.CatalogError,
            ValueError, OSError, KeyError) as e:
        print(f"error: {e}", file=sys.stderr)
        return USAGE


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    main()

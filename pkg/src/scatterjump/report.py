"""Report writer: term census and reduction verification as CSV, JSON and a PNG figure."""
from __future__ import annotations

import csv
import json
import os
from collections import Counter

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from . import order_terms as ot  # noqa: E402
from . import reductions as rd  # noqa: E402
from .oracles import enumerate_terms  # noqa: E402


def census_rows(size: int) -> list[dict]:
    counts: Counter = Counter()
    for t in enumerate_terms(size):
        r = "empty" if ot._is_empty(t) else ot.rank(t)
        counts[(ot.size(t), r)] += 1
    return [{"size": s, "rank": r, "terms": n}
            for (s, r), n in sorted(counts.items(), key=lambda kv: (kv[0][0], str(kv[0][1])))]


def reduction_rows(names=None) -> list[dict]:
    rows = []
    for name in names or list(rd.CATALOG):
        rep = rd.verify_reduction(rd.catalog_reduction(name))
        rows.append({"reduction": name, "pairs": rep.pairs_checked, "positives": rep.positives,
                     "forward_failures": len(rep.forward_failures),
                     "backward_failures": len(rep.backward_failures),
                     "cross_check_failures": len(rep.cross_check_failures)})
    return rows


def _write_csv(path: str, rows: list[dict]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.DictWriter(fh, fieldnames=list(rows[0]))
        w.writeheader()
        w.writerows(rows)


def write_report(out: str, size: int = 6, names=None) -> list[str]:
    os.makedirs(out, exist_ok=True)
    census = census_rows(size)
    reds = reduction_rows(names)
    paths = [os.path.join(out, n) for n in ("census.csv", "reductions.csv", "report.json", "report.png")]
    _write_csv(paths[0], census)
    _write_csv(paths[1], reds)
    with open(paths[2], "w", encoding="utf-8") as fh:
        json.dump({"census": census, "reductions": reds}, fh, indent=2, sort_keys=True)

    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(11, 4))
    ranks = sorted({r["rank"] for r in census}, key=str)
    sizes = sorted({r["size"] for r in census})
    bottom = [0] * len(sizes)
    for rk in ranks:
        vals = [sum(r["terms"] for r in census if r["size"] == s and r["rank"] == rk) for s in sizes]
        ax1.bar(sizes, vals, bottom=bottom, label=f"rank {rk}")
        bottom = [b + v for b, v in zip(bottom, vals)]
    ax1.set_yscale("log")
    ax1.set_xlabel("term size")
    ax1.set_ylabel("terms")
    ax1.set_title("term census by rank")
    ax1.legend(fontsize=7)

    labels = [r["reduction"] for r in reds]
    ax2.barh(labels, [r["pairs"] for r in reds], color="tab:blue", label="pairs")
    ax2.barh(labels, [r["positives"] for r in reds], color="tab:green", label="equivalent pairs")
    bad = [r["forward_failures"] + r["backward_failures"] + r["cross_check_failures"] for r in reds]
    ax2.barh(labels, bad, color="tab:red", label="failures")
    ax2.set_xscale("log")
    ax2.set_title("reduction verification")
    ax2.legend(fontsize=7)
    fig.tight_layout()
    fig.savefig(paths[3], dpi=120)
    plt.close(fig)
    return paths

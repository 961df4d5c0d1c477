"""Independent oracle for the committed golden outputs.

Recomputes currency decay, max-normalization, the weighted data value, the
rankings, and NDCG / NDCG@k (scikit-learn's ndcg_score, default parameters)
directly from the fixture files, then writes the golden files the Rust test
suite diffs against. Shares no code with the crate.
"""
import datetime as dt
import json
import math
from pathlib import Path

from sklearn.metrics import ndcg_score

ROOT = Path(__file__).resolve().parent.parent
DECLINE = 0.2
K = 5

cat = json.loads((ROOT / "catalog.json").read_text())
as_of = dt.date.fromisoformat(cat["as_of_date"])
ds = cat["datasets"]
ids = [d["id"] for d in ds]

sources = sorted({s for d in ds for s in d["utilities"] if s != "avg"})
if any("avg" in d["utilities"] for d in ds):
    sources.append("avg")
default_source = "avg" if "avg" in sources else sources[0]


def currency(d):
    age = (as_of - dt.date.fromisoformat(d["creation_date"])).days / 365.25
    return min(1.0, math.exp(-DECLINE * age))


def usage(d, mode):
    counts = [u["count"] for u in d["usage"]]
    if not counts:
        return 0.0
    total = float(sum(counts))
    return total if mode == "total" else total / len(counts)


def dims(mode, source):
    max_obj = max(d["n_spatial_objects"] for d in ds)
    max_use = max(usage(d, mode) for d in ds)
    out = {}
    for d in ds:
        out[d["id"]] = {
            "utility": d["utilities"][source] / 100.0,
            "currency": currency(d),
            "objects": d["n_spatial_objects"] / max_obj if max_obj > 0 else 0.0,
            "usage": usage(d, mode) / max_use if max_use > 0 else 0.0,
        }
    return out


def values(weights, mode, source):
    total = sum(weights.values())
    assert total > 0
    w = {k: v / total for k, v in weights.items()}
    out = {}
    for i, x in dims(mode, source).items():
        v = (w["utility"] * x["utility"] + w["usage"] * x["usage"]
             + w["creation_date"] * x["currency"] + w["n_objects"] * x["objects"])
        out[i] = min(1.0, max(0.0, v))
    return out


def ranking(vals):
    return sorted(vals.items(), key=lambda kv: (-kv[1], kv[0]))


def ndcg_pair(ideal, vals):
    vs = sorted(vals.values())
    # exact ties are fine; near-ties would make tie grouping platform-dependent
    assert all(b - a == 0 or b - a > 1e-9 for a, b in zip(vs, vs[1:])), "near-tie in scores"
    n = len(ideal)
    rel = {i: float(n - 1 - p) for p, i in enumerate(ideal)}
    y_true = [[rel[i] for i in ids]]
    y_score = [[vals[i] for i in ids]]
    return ndcg_score(y_true, y_score), ndcg_score(y_true, y_score, k=K)


# Golden ranking: SH1 weights, total usage, default utility source.
sh1 = json.loads((ROOT / "profiles" / "sh1.json").read_text())
ranked = ranking(values(sh1["weights"], "total", default_source))
vals_sorted = [v for _, v in ranked]
assert all(a - b > 1e-9 for a, b in zip(vals_sorted, vals_sorted[1:])), "near-tie in golden ranking"
with open(ROOT / "golden" / "rank_sh1.csv", "w") as f:
    f.write("rank,dataset_id,data_value\n")
    for r, (i, v) in enumerate(ranked, 1):
        f.write(f"{r},{i},{v:.6f}\n")

ONE_HOT = {
    "utility": {"utility": 1, "creation_date": 0, "n_objects": 0, "usage": 0},
    "creation_date": {"utility": 0, "creation_date": 1, "n_objects": 0, "usage": 0},
    "n_objects": {"utility": 0, "creation_date": 0, "n_objects": 1, "usage": 0},
    "usage": {"utility": 0, "creation_date": 0, "n_objects": 0, "usage": 1},
}
EQUAL = {"utility": 1, "creation_date": 1, "n_objects": 1, "usage": 1}


def averaged_variants(pid):
    out = [("total_usage", "Total Usage", "total", default_source),
           ("average_usage", "Average Usage", "average", default_source)]
    if pid in sources and pid != default_source:
        out.append((f"provided_utility:{pid}", "Provided Utility", "total", pid))
    return out


def utility_label(s):
    return "Average Utility" if s == "avg" else f"Utility ({s})"


rows = []  # (stakeholder, method_key, method_label, variant_key, variant_label, ndcg, ndcg_k)
for pid in ["sh1", "sh2", "sh3"]:
    prof = json.loads((ROOT / "profiles" / f"{pid}.json").read_text())
    ideal = prof["ideal_ranking"]
    groups = []
    if sum(prof["weights"].values()) > 0:
        groups.append(("weighted", "Weighted Average",
                       [(vk, vl, prof["weights"], m, s) for vk, vl, m, s in averaged_variants(pid)]))
    groups.append(("simple", "Simple Average",
                   [(vk, vl, EQUAL, m, s) for vk, vl, m, s in averaged_variants(pid)]))
    uni = [(f"utility:{s}", utility_label(s), ONE_HOT["utility"], "total", s) for s in sources]
    uni += [("n_objects", "Number of Spatial Objects", ONE_HOT["n_objects"], "total", default_source),
            ("creation_date", "Creation Date", ONE_HOT["creation_date"], "total", default_source),
            ("total_usage", "Total Usage", ONE_HOT["usage"], "total", default_source),
            ("average_usage", "Average Usage", ONE_HOT["usage"], "average", default_source)]
    groups.append(("univariate", "Univariate", uni))
    for mk, ml, variants in groups:
        cells = []
        for vk, vl, w, m, s in variants:
            n, nk = ndcg_pair(ideal, values(w, m, s))
            cells.append([pid, mk, ml, vk, vl, n, nk])
        best_n = max(c[5] for c in cells)
        best_k = max(c[6] for c in cells)
        for c in cells:
            c.append(abs(c[5] - best_n) <= 1e-9)
            c.append(abs(c[6] - best_k) <= 1e-9)
        rows.extend(cells)

with open(ROOT / "golden" / "evaluate.csv", "w") as f:
    f.write("stakeholder,method,variant,ndcg,ndcg_at_k,best_ndcg,best_ndcg_at_k\n")
    for pid, mk, _, vk, _, n, nk, bn, bk in rows:
        f.write(f"{pid},{mk},{vk},{n:.6f},{nk:.6f},{str(bn).lower()},{str(bk).lower()}\n")


def cell(x, best):
    s = f"{x:.4f}"
    return f"**{s}**" if best else s


with open(ROOT / "golden" / "evaluate.md", "w") as f:
    f.write(f"| Stakeholder | Method | Variant | NDCG | NDCG@{K} |\n")
    f.write("| --- | --- | --- | ---: | ---: |\n")
    prev_pid, prev_method = None, None
    for pid, mk, ml, _, vl, n, nk, bn, bk in rows:
        sh = pid if pid != prev_pid else ""
        me = ml if (pid, mk) != prev_method else ""
        f.write(f"| {sh} | {me} | {vl} | {cell(n, bn)} | {cell(nk, bk)} |\n")
        prev_pid, prev_method = pid, (pid, mk)

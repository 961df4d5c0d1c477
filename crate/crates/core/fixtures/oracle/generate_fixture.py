"""Generates the synthetic 15-dataset catalog and three stakeholder profiles.

Run once; the outputs are committed. Re-running overwrites them with the same
bytes (fixed seed).
"""
import csv
import datetime as dt
import json
import random
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
rng = random.Random(20230131)

AS_OF = "2023-01-31"
MONTHS = [(2017 + (i // 12), 1 + i % 12) for i in range(73)]  # 2017-01 .. 2023-01

names = [
    "Building Footprints", "Road Centrelines", "Townland Boundaries",
    "Orthophotography 2015", "Hydrography Network", "Address Points",
    "Elevation Model 10m", "Land Cover", "Railway Lines",
    "Coastline", "Place Names", "Electoral Divisions",
    "Historic Maps 6-inch", "Forestry Parcels", "Lidar Survey 2021",
]

creation_days = rng.sample(range(0, 365 * 17), 15)
object_counts = rng.sample(range(1_000, 2_500_000), 15)

datasets = []
for i, name in enumerate(names):
    ds_id = f"ds-{i + 1:02d}"
    created = dt.date(2005, 3, 1) + dt.timedelta(days=creation_days[i])
    usage = []
    if i != 9:  # ds-10 was never used
        base = rng.randint(0, 60)
        for (y, m) in MONTHS:
            ym = dt.date(y, m, 1)
            if ym < created.replace(day=1):
                continue
            if rng.random() < 0.12:  # gap: month not recorded
                continue
            usage.append({"month": f"{y:04d}-{m:02d}", "count": max(0, base + rng.randint(-15, 25))})
    sh1 = rng.choice([40, 55, 60, 70, 80, 80, 90, 95, 100, 30])
    avg = round(rng.uniform(25, 95) * 4) / 4  # quarter steps, exact in binary
    datasets.append({
        "id": ds_id,
        "name": name,
        "creation_date": created.isoformat(),
        "n_spatial_objects": object_counts[i],
        "usage": usage,
        "utilities": {"sh1": sh1, "avg": avg},
    })

catalog = {"as_of_date": AS_OF, "datasets": datasets}
(ROOT / "catalog.json").write_text(json.dumps(catalog, indent=2) + "\n")

with open(ROOT / "catalog.csv", "w", newline="") as f:
    w = csv.writer(f, lineterminator="\n")
    w.writerow(["id", "name", "creation_date", "n_spatial_objects", "utility:sh1", "utility:avg"])
    for d in datasets:
        w.writerow([d["id"], d["name"], d["creation_date"], d["n_spatial_objects"],
                    d["utilities"]["sh1"], d["utilities"]["avg"]])
with open(ROOT / "usage.csv", "w", newline="") as f:
    w = csv.writer(f, lineterminator="\n")
    w.writerow(["id", "month", "count"])
    for d in datasets:
        for u in d["usage"]:
            w.writerow([d["id"], u["month"], u["count"]])

ids = [d["id"] for d in datasets]
profiles = {
    "sh1": {"utility": 8, "creation_date": 10, "n_objects": 8, "usage": 5},
    "sh2": {"utility": 0, "creation_date": 0, "n_objects": 0, "usage": 0},
    "sh3": {"utility": 7, "creation_date": 9, "n_objects": 9, "usage": 4},
}
for pid, weights in profiles.items():
    ideal = ids[:]
    rng.shuffle(ideal)
    doc = {"id": pid, "weights": weights, "ideal_ranking": ideal}
    (ROOT / "profiles" / f"{pid}.json").write_text(json.dumps(doc, indent=2) + "\n")

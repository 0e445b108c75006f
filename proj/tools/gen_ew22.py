#!/usr/bin/env python3
"""Regenerates data/ew22.json and data/ew22_seeds.txt.

The attribute values are synthetic. Output is deterministic for a given --seed.
"""
import argparse
import itertools
import json
import random
from pathlib import Path

LABELS = [
    "Long-range phased-array radar", "Over-the-horizon radar", "Mobile X-band radar",
    "Airborne early-warning aircraft", "Infrared early-warning satellite", "Optical surveillance satellite",
    "Passive RF sensor network", "Acoustic sensor array", "Maritime patrol radar",
    "Tracking radar station", "Sensor fusion centre", "Regional operations centre",
    "National command node", "Tactical data link", "Satellite communication terminal",
    "HF radio network", "Fibre backbone", "Public alerting gateway",
    "GNSS augmentation station", "Timing reference station", "Geodetic survey unit",
    "Mission planning cell",
]

CAPABILITIES = [
    ("detection", [1, 2, 3, 4, 5, 6, 7, 8, 9]),
    ("tracking", [1, 3, 4, 9, 10, 11, 6]),
    ("warning", [11, 12, 13, 14, 15, 16, 17, 18]),
    ("positioning", [5, 19, 20, 21, 14, 15]),
    ("command", [12, 13, 22, 14, 15, 16, 17, 11]),
]

NOTES = [
    "Synthetic scenario: attribute values are generated, not measured.",
    "Upgrade narrative (not modelled): detection range 1000 km to 7000 km.",
    "Upgrade narrative (not modelled): warning time 1 h to 1.5 h.",
    "Upgrade narrative (not modelled): positioning accuracy +4%.",
]


def attrs(rng, perf_lo, perf_hi):
    return {
        "cost": rng.randint(2, 12),
        "duration": rng.randint(6, 30),
        "performance": round(rng.uniform(perf_lo, perf_hi), 2),
    }


def build(seed):
    rng = random.Random(seed)
    n = len(LABELS)
    pairs = set()
    for _, members in CAPABILITIES:
        combos = list(itertools.combinations(sorted(members), 2))
        pairs.update(rng.sample(combos, 8))
    pairs = sorted(pairs)
    interfaces = [{"id": k + 1, "endpoints": [a, b]} for k, (a, b) in enumerate(pairs)]
    by_pair = {p: k + 1 for k, p in enumerate(pairs)}

    caps = []
    for cid, members in CAPABILITIES:
        systems = [{"id": j, **attrs(rng, 0.45, 0.95)} for j in sorted(members)]
        mine = [p for p in pairs if p[0] in members and p[1] in members]
        chosen = sorted(rng.sample(mine, min(len(mine), 6)))
        ifaces = [{"id": by_pair[p], **attrs(rng, 0.5, 0.95)} for p in chosen]
        for c in ifaces:
            c["cost"] = rng.randint(1, 4)
        caps.append({
            "id": cid,
            "budget": 30,
            "deadline": 30,
            "performance_floor": 0.7,
            "systems": systems,
            "interfaces": ifaces,
        })
    return {
        "name": "ew22",
        "description": "Synthetic early-warning system-of-systems with 22 optional systems and 5 capabilities.",
        "notes": NOTES,
        "expected_duration": 36,
        "systems": [{"id": j + 1, "label": LABELS[j]} for j in range(n)],
        "interfaces": interfaces,
        "capabilities": caps,
    }


def pair_bit(n, a, b):
    return n + (a - 1) * (2 * n - a) // 2 + (b - a) - 1


def feasible(doc, active_sys, active_if):
    ends = {i["id"]: tuple(i["endpoints"]) for i in doc["interfaces"]}
    live = {k for k in active_if if ends[k][0] in active_sys and ends[k][1] in active_sys}
    if live != set(active_if):
        return False
    used_sys, used_if = set(), set()
    for c in doc["capabilities"]:
        s = [x for x in c["systems"] if x["id"] in active_sys]
        i = [x for x in c["interfaces"] if x["id"] in live]
        used_sys |= {x["id"] for x in c["systems"]}
        used_if |= {x["id"] for x in c["interfaces"]}
        if not s or sum(x["cost"] for x in s + i) > c["budget"]:
            return False
        if max(x["duration"] for x in s + i) > c["deadline"]:
            return False
        if max(x["performance"] for x in s) < c["performance_floor"]:
            return False
        if c["interfaces"] and max((x["performance"] for x in i), default=0.0) < c["performance_floor"]:
            return False
    return set(active_sys) <= used_sys and set(live) <= used_if


def seeds(doc, count, seed):
    rng = random.Random(seed)
    n = len(doc["systems"])
    ends = {i["id"]: tuple(i["endpoints"]) for i in doc["interfaces"]}
    out = []
    while len(out) < count:
        active_if = set()
        for c in doc["capabilities"]:
            good = [x["id"] for x in c["interfaces"] if x["performance"] >= c["performance_floor"]]
            active_if.add(rng.choice(good))
        active_sys = {j for k in active_if for j in ends[k]}
        if not feasible(doc, active_sys, active_if):
            continue
        bits = ["0"] * (n + n * (n - 1) // 2)
        for j in active_sys:
            bits[j - 1] = "1"
        for k in active_if:
            bits[pair_bit(n, *ends[k])] = "1"
        text = "".join(bits)
        if text not in out:
            out.append(text)
    return out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out-dir", type=Path, default=Path(__file__).resolve().parent.parent / "data")
    ap.add_argument("--seed", type=int, default=2022)
    args = ap.parse_args()
    doc = build(args.seed)
    (args.out_dir / "ew22.json").write_text(json.dumps(doc, indent=2) + "\n")
    lines = ["# ew22 seed schemes, one genome per line"] + seeds(doc, 10, args.seed + 1)
    (args.out_dir / "ew22_seeds.txt").write_text("\n".join(lines) + "\n")


if __name__ == "__main__":
    main()

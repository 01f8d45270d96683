#!/usr/bin/env python3
"""Reference Wilcoxon signed-rank p-values from scipy.stats.wilcoxon.

Small cases use the exact null distribution; larger ones the normal
approximation with tie and continuity corrections.
"""

import argparse
import json
import random

from scipy.stats import wilcoxon


def case(name, a, b, method):
    res = wilcoxon(a, b, zero_method="wilcox", correction=True, alternative="two-sided", method=method)
    return {"name": name, "a": a, "b": b, "method": method, "p_value": float(res.pvalue)}


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("out")
    path = ap.parse_args().out
    rng = random.Random(2024)
    cases = []
    a = [0.61, 0.42, 0.75, 0.33, 0.58, 0.91, 0.27, 0.66, 0.49, 0.8]
    b = [0.52, 0.45, 0.6, 0.21, 0.5, 0.7, 0.31, 0.44, 0.4, 0.55]
    cases.append(case("exact_10", a, b, "exact"))
    a = [round(rng.uniform(0, 100), 3) for _ in range(20)]
    b = [round(x - rng.uniform(-20, 40), 3) for x in a]
    cases.append(case("exact_20", a, b, "exact"))
    # 60 pairs on a coarse grid: zeros and tied magnitudes
    a = [rng.randint(0, 10) * 5.0 for _ in range(60)]
    b = [x + rng.choice([-10.0, -5.0, 0.0, 5.0, 5.0, 10.0, 15.0]) for x in a]
    cases.append(case("approx_ties_60", a, b, "approx"))
    a = [rng.gauss(50, 15) for _ in range(300)]
    b = [x + rng.gauss(1.5, 10) for x in a]
    cases.append(case("approx_300", a, b, "approx"))
    with open(path, "w", encoding="utf-8") as f:
        json.dump({"wilcoxon": cases}, f, indent=2)
        f.write("\n")


if __name__ == "__main__":
    main()

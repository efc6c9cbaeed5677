"""Contingency-table purity and NMI for the fixed acceptance instances.

NMI = 2 I(C; K) / (H(C) + H(K)), natural log; 1 when both entropies are 0.
Prints C++ initializers for tests/acceptance.cpp.
"""
import math
import random
from collections import Counter

rng = random.Random(20)
instances = [
    ([0, 0, 1, 1], ["x", "x", "y", "y"]),
    ([0, 1, 0, 1], ["x", "x", "y", "y"]),
    ([0, 0, 0, 0], ["x", "x", "y", "y"]),
    ([0, 1, 2, 3], ["x", "x", "y", "y"]),
    ([3], ["solo"]),
    ([0, 0, 0], ["a", "a", "a"]),
]
while len(instances) < 20:
    n = rng.randint(2, 10)
    k = rng.randint(1, 4)
    c = rng.randint(1, 4)
    clusters = [rng.randrange(k) for _ in range(n)]
    labels = ["abcd"[rng.randrange(c)] for _ in range(n)]
    instances.append((clusters, labels))


def score(clusters, labels):
    n = len(clusters)
    joint = Counter(zip(clusters, labels))
    pc = Counter(clusters)
    pk = Counter(labels)
    purity = sum(max(v for (cc, _), v in joint.items() if cc == c) for c in pc) / n
    mi = sum(v / n * math.log((v / n) / ((pc[c] / n) * (pk[l] / n)))
             for (c, l), v in joint.items())
    hc = -sum(v / n * math.log(v / n) for v in pc.values())
    hk = -sum(v / n * math.log(v / n) for v in pk.values())
    nmi = 1.0 if hc + hk == 0 else min(1.0, max(0.0, 2 * mi / (hc + hk)))
    return purity, nmi


for clusters, labels in instances:
    p, m = score(clusters, labels)
    cs = ", ".join(map(str, clusters))
    ls = ", ".join(f'"{l}"' for l in labels)
    print(f"    {{{{{cs}}}, {{{ls}}}, {p!r}, {m!r}}},")

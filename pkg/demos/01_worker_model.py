#!/usr/bin/env python3
"""Workers, the accept/decline rule, and cost-quality regimes.

A worker takes a posted offer (base p, bonus q) exactly when the expected
payment p + q * quality covers her opportunity cost.  When qualities
follow a curve r = f(cost), the *shape* of that curve decides which
workers any common offer can reach; this demo classifies the three
canonical shapes.
"""

import math

from crowdprice import (
    CommonPolicy,
    CostQualityCurve,
    WorkerProfile,
    classify_regime,
    decide,
    expected_payment,
    sort_by_bang_per_buck,
)

workers = [
    WorkerProfile(quality=0.9, cost=0.30, id="alice"),
    WorkerProfile(quality=0.5, cost=0.25, id="bob"),
    WorkerProfile(quality=0.8, cost=0.50, id="carol"),
]

offer = CommonPolicy(base=0.1, bonus=0.4)
print(f"posted offer: base={offer.base}, bonus={offer.bonus}")
for w in workers:
    verdict = "accepts" if decide(w, offer) else "declines"
    print(f"  {w.id}: quality {w.quality}, cost {w.cost} -> {verdict}, "
          f"expected payment {expected_payment(w, offer):.3f}")

order = sort_by_bang_per_buck(workers)
print("\nbang-per-buck order (quality/cost, best first):")
for i in order:
    w = workers[i]
    print(f"  {w.id}: {w.quality / w.cost:.2f}")

print("\ncost-quality regimes on [0.1, 1]:")
curves = [
    ("sqrt(x)   ", CostQualityCurve(f=math.sqrt)),
    ("x^0.9-0.12", CostQualityCurve(f=lambda x: x**0.9 - 0.12)),
    ("x^2       ", CostQualityCurve(f=lambda x: x * x)),
    ("x (linear)", CostQualityCurve(f=lambda x: x, fprime=lambda x: 1.0, fsecond=lambda x: 0.0)),
]
for label, curve in curves:
    domain = (0.3, 0.95) if "0.9" in label else (0.1, 1.0)
    print(f"  f = {label} -> {classify_regime(curve, domain).value}")

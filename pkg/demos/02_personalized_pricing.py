#!/usr/bin/env python3
"""Personalized pricing as a knapsack, three ways.

Choosing whom to recruit with per-worker prices is a 0-1 knapsack over
worker subsets.  This demo solves one instance exactly (subset
enumeration), with the bang-per-buck greedy (guaranteed half of the
optimum for subadditive Schur-convex utilities), and with the fractional
relaxation, then rebuilds the actual price lists.
"""

import numpy as np

from crowdprice import (
    GkpInstance,
    WorkerProfile,
    decide,
    make_typo,
    modified_greedy,
    policy_from_selection,
    solve_gkp_exact,
    solve_gkp_relaxed,
    sort_by_bang_per_buck,
)

rng = np.random.default_rng(42)
n = 10
workers = tuple(
    WorkerProfile(quality=float(rng.uniform(0.2, 0.95)), cost=float(rng.uniform(0.1, 0.8)), id=i)
    for i in range(1, n + 1)
)
budget = 0.45 * sum(w.cost for w in workers)
utility = make_typo(25, 1)  # expected typos corrected by at least one worker
instance = GkpInstance(workers=workers, budget=budget, utility=utility)

exact = solve_gkp_exact(instance)
greedy, greedy_policy = modified_greedy(instance)
order = sort_by_bang_per_buck(workers)
relaxed = solve_gkp_relaxed(
    GkpInstance(workers=tuple(workers[i] for i in order), budget=budget, utility=utility)
)

print(f"n={n} workers, budget {budget:.3f}")
print(f"exact optimum:  utility {exact.utility_value:.4f}, spends {exact.spent:.3f}, "
      f"recruits {[workers[i].id for i in exact.chosen]}")
print(f"greedy:         utility {greedy.utility_value:.4f}  "
      f"({greedy.utility_value / exact.utility_value:.1%} of optimum; guarantee is 50%)")
print(f"relaxation:     value   {relaxed.value:.4f}  (fractional, split worker "
      f"{relaxed.split_index})")

print("\nzero-bonus price list for the exact selection (pay each selected worker her cost):")
policy = policy_from_selection(workers, exact.x)
for w, (p, q) in zip(workers, policy.pairs):
    took = decide(w, (p, q))
    print(f"  worker {w.id}: base {p:.3f}, bonus {q:.3f} -> {'recruited' if took else 'passes'}")

print("\npure-bonus variant (base 0) for the same selection:")
pure = policy_from_selection(workers, exact.x, base_choices=[0.0] * n)
for w, (p, q) in zip(workers, pure.pairs):
    if q:
        print(f"  worker {w.id}: bonus {q:.3f} (expected payment {q * w.quality:.3f} = cost)")

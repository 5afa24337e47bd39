#!/usr/bin/env python3
"""One price for everyone: structure and the three regime solvers.

A common (base, bonus) pair cannot address workers individually; who
accepts is decided by which side of the line p + q*r = c each worker
falls on.  On curve-generated profiles the accepted set is always a
quality-rank suffix (unresponsive), interval (subresponsive), or interval
complement (responsive), so the regime solvers only search those shapes.
The plane oracle cross-checks each of them here.
"""

import numpy as np

from crowdprice import (
    WorkerProfile,
    cp_exact_oracle,
    cp_no_bonus,
    cp_res,
    cp_subres,
    cp_unres,
    make_typo,
    structure_of,
)

rng = np.random.default_rng(7)
utility = make_typo(25, 1)

cases = [
    ("unresponsive (f = 0.9 sqrt c)", lambda c: 0.9 * np.sqrt(c), 0.1, 1.0, cp_unres),
    ("subresponsive (f = c^0.8 - 0.22)", lambda c: c**0.8 - 0.22, 0.35, 1.0, cp_subres),
    ("responsive (f = 0.9 c^2)", lambda c: 0.9 * c * c, 0.1, 1.0, cp_res),
]

for label, curve, lo, hi, solver in cases:
    costs = np.sort(rng.uniform(lo, hi, size=8))
    workers = [WorkerProfile(float(curve(c)), float(c), i + 1) for i, c in enumerate(costs)]
    budget = 0.5 * float(np.sum(costs))
    report = solver(workers, budget, utility, diagnostics=False)
    oracle = cp_exact_oracle(workers, budget, utility)
    baseline = cp_no_bonus(workers, budget, utility)
    print(f"{label}, budget {budget:.3f}")
    print(f"  solver: base {report.policy.base:.4f}, bonus {report.policy.bonus:.4f} "
          f"-> utility {report.utility_value:.4f}, spends {report.spent:.3f}")
    print(f"  accepted ranks form: {report.structure.kind.value} "
          f"[{report.structure.lower}, {report.structure.upper}]")
    print(f"  oracle agrees: {abs(report.utility_value - oracle.utility_value) <= 1e-9}")
    print(f"  no-bonus baseline: utility {baseline.utility_value:.4f} "
          f"(base {baseline.policy.base:.3f})")
    print()

print("structure of an arbitrary accepted set (not from a curve):")
mixed = [WorkerProfile(0.9, 0.2, 1), WorkerProfile(0.7, 0.9, 2), WorkerProfile(0.4, 0.1, 3)]
print("  accept workers 1 and 3 ->", structure_of(mixed, [0, 2]).kind.value)

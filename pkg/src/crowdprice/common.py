"""Common pricing: one (base, bonus) pair posted to every worker.

The accepted set under a common policy is controlled only through the
geometry of the n lines p + r_i * q = c_i.  On profiles generated by a
cost-quality curve the accepted set is highly structured (a quality-rank
suffix, interval, or interval complement depending on the regime), which
the regime solvers exploit; an exact oracle over the whole (p, q) plane
serves as the regime-free ground truth.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np

from .errors import SizeError
from .halfplane import HalfPlane, feasible_point, repair_strict
from .utilities import UtilityFunction
from .workers import (
    CommonPolicy,
    Regime,
    WorkerProfile,
    sort_by_bang_per_buck,
    warn_if_off_regime,
)

__all__ = [
    "StructureKind",
    "StructureClass",
    "CpSolveReport",
    "accepted_set",
    "classify_structure",
    "structure_of",
    "cp_unres",
    "cp_subres",
    "cp_res",
    "cp_no_bonus",
    "cp_exact_oracle",
    "make_report",
]

ORACLE_LIMIT = 14


class StructureKind(Enum):
    PICKING_SUFFIX = "picking-suffix"
    PICKING = "picking"
    BLOCKING = "blocking"
    OTHER = "other"


@dataclass(frozen=True)
class StructureClass:
    """Shape of an accepted set over quality-descending ranks (1-based).

    For picking kinds the bounds delimit the accepted ranks; for blocking
    they delimit the declined ranks.  The empty accepted set is picking
    with no bounds.
    """

    kind: StructureKind
    lower: int | None = None
    upper: int | None = None

    @property
    def is_picking_interval(self) -> bool:
        return self.kind in (StructureKind.PICKING, StructureKind.PICKING_SUFFIX)


@dataclass(frozen=True)
class CpSolveReport:
    policy: CommonPolicy
    accepted: tuple[int, ...]
    spent: float
    utility_value: float
    structure: StructureClass


def accepted_set(
    workers: Sequence[WorkerProfile], policy: CommonPolicy | tuple[float, float]
) -> tuple[tuple[int, ...], float]:
    """Workers accepting the common policy, and the exact payment total."""
    if isinstance(policy, CommonPolicy):
        p, q = policy.base, policy.bonus
    else:
        p, q = policy
    accepted = tuple(i for i, w in enumerate(workers) if p + q * w.quality >= w.cost)
    spent = math.fsum(p + q * workers[i].quality for i in accepted)
    return accepted, spent


def _quality_order(workers: Sequence[WorkerProfile]) -> list[int]:
    return sorted(range(len(workers)), key=lambda i: (-workers[i].quality, workers[i].cost, i))


def classify_structure(
    qualities_desc: Sequence[float], accepted_ranks: Sequence[int]
) -> StructureClass:
    """Classify an accepted rank set (1-based, over descending qualities).

    Equal-quality workers are grouped; a set counts as contiguous only if
    it is a union of complete tie-groups forming a rank interval.  A split
    tie-group is classified Other (it can only arise from unequal costs at
    equal quality).
    """
    n = len(qualities_desc)
    if any(qualities_desc[i] < qualities_desc[i + 1] for i in range(n - 1)):
        raise ValueError("qualities must be sorted in descending order")
    accepted = set(accepted_ranks)
    if not accepted.issubset(range(1, n + 1)):
        raise ValueError("accepted ranks must be within 1..n")
    if not accepted:
        return StructureClass(StructureKind.PICKING)

    groups: list[range] = []
    start = 0
    for i in range(1, n + 1):
        if i == n or qualities_desc[i] != qualities_desc[start]:
            groups.append(range(start + 1, i + 1))
            start = i
    taken: list[bool] = []
    for g in groups:
        inside = sum(1 for rank in g if rank in accepted)
        if 0 < inside < len(g):
            return StructureClass(StructureKind.OTHER)
        taken.append(inside > 0)

    def contiguous(flags: list[int]) -> bool:
        return flags == list(range(flags[0], flags[0] + len(flags)))

    lo, hi = min(accepted), max(accepted)
    accepted_groups = [k for k, t in enumerate(taken) if t]
    if contiguous(accepted_groups):
        if hi == n:
            return StructureClass(StructureKind.PICKING_SUFFIX, lo, n)
        return StructureClass(StructureKind.PICKING, lo, hi)

    declined_groups = [k for k, t in enumerate(taken) if not t]
    if declined_groups and contiguous(declined_groups):
        first = groups[declined_groups[0]][0]
        last = groups[declined_groups[-1]][-1]
        if first > 1 and last < n:
            return StructureClass(StructureKind.BLOCKING, first, last)
    return StructureClass(StructureKind.OTHER)


def structure_of(workers: Sequence[WorkerProfile], accepted: Sequence[int]) -> StructureClass:
    """Classify an accepted set given by original worker indices."""
    order = _quality_order(workers)
    rank_of = {i: rank for rank, i in enumerate(order, start=1)}
    qualities = [workers[i].quality for i in order]
    return classify_structure(qualities, [rank_of[i] for i in accepted])


def make_report(
    workers: Sequence[WorkerProfile], utility: UtilityFunction, p: float, q: float
) -> CpSolveReport:
    """Evaluate a policy honestly: accepted set, spend, utility, structure."""
    accepted, spent = accepted_set(workers, (p, q))
    chosen = set(accepted)
    effective = [w.quality if i in chosen else 0.0 for i, w in enumerate(workers)]
    return CpSolveReport(
        policy=CommonPolicy(base=p, bonus=q),
        accepted=accepted,
        spent=spent,
        utility_value=utility.evaluate(effective),
        structure=structure_of(workers, accepted),
    )


def _better(a: CpSolveReport, b: CpSolveReport) -> bool:
    ka = (-a.utility_value, a.spent, a.policy.base, a.policy.bonus)
    kb = (-b.utility_value, b.spent, b.policy.base, b.policy.bonus)
    return ka < kb


# ---------------------------------------------------------------------------
# Regime solvers
# ---------------------------------------------------------------------------


def cp_unres(
    workers: Sequence[WorkerProfile],
    budget: float,
    utility: UtilityFunction,
    diagnostics: bool = True,
) -> CpSolveReport:
    """Optimal common pricing for effort-unresponsive profiles.

    In this regime bang-per-buck decreases with cost, so every policy
    recruits a bang-per-buck prefix and a pure bonus is enough: the
    candidates are exactly the minimal bonuses c_k / r_k that recruit the
    first k workers, and the largest affordable prefix wins.  Workers with
    zero quality and positive cost would need an infinite bonus and are
    skipped as candidates.
    """
    if budget < 0:
        raise ValueError("budget must be >= 0")
    if diagnostics and len(workers) >= 2:
        warn_if_off_regime(workers, Regime.EFFORT_UNRESPONSIVE)
    order = sort_by_bang_per_buck(workers)
    bonuses = {0.0}
    for i in order:
        w = workers[i]
        if w.quality > 0.0:
            q = w.cost / w.quality
            # fl(q * r) can land one ulp under the cost; the bumped twin
            # makes sure the worker's own threshold actually recruits her
            bonuses.add(q)
            bonuses.add(q * (1.0 + 5e-16))
    best: CpSolveReport | None = None
    for q in sorted(bonuses):
        report = make_report(workers, utility, 0.0, q)
        if report.spent <= budget and (best is None or _better(report, best)):
            best = report
    assert best is not None  # q = 0 spends nothing
    return best


def _picking_rows(
    r: Sequence[float], c: Sequence[float], lo: int, hi: int, budget: float
) -> list[HalfPlane]:
    """Rows forcing ranks lo..hi (1-based) to accept and their neighbors to
    decline, with the sentinel profile r_0 = r_{n+1} = 0, c_0 = c_{n+1} = B."""
    n = len(r)
    r_ext = [0.0, *r, 0.0]
    c_ext = [budget, *c, budget]
    span = list(range(lo, hi + 1))
    return [
        HalfPlane(1.0, r_ext[lo - 1], c_ext[lo - 1], strict=True),
        HalfPlane(-1.0, -r_ext[lo], -c_ext[lo]),
        HalfPlane(-1.0, -r_ext[hi], -c_ext[hi]),
        HalfPlane(1.0, r_ext[hi + 1], c_ext[hi + 1], strict=True),
        HalfPlane(float(len(span)), math.fsum(r_ext[i] for i in span), budget),
    ]


def _blocking_rows(
    r: Sequence[float], c: Sequence[float], lo: int, hi: int, budget: float
) -> list[HalfPlane]:
    """Rows forcing ranks lo..hi to decline while their neighbors accept,
    with the budget taken over the accepted complement."""
    n = len(r)
    rows = [
        HalfPlane(1.0, r[lo - 1], c[lo - 1], strict=True),
        HalfPlane(1.0, r[hi - 1], c[hi - 1], strict=True),
    ]
    if lo >= 2:
        rows.append(HalfPlane(-1.0, -r[lo - 2], -c[lo - 2]))
    if hi <= n - 1:
        rows.append(HalfPlane(-1.0, -r[hi], -c[hi]))
    outside = [i for i in range(n) if not (lo - 1 <= i <= hi - 1)]
    rows.append(
        HalfPlane(float(len(outside)), math.fsum(r[i] for i in outside), budget)
    )
    return rows


def _candidate(
    workers: Sequence[WorkerProfile],
    utility: UtilityFunction,
    budget: float,
    rows: list[HalfPlane],
    scale: float,
) -> CpSolveReport | None:
    """Best budget-feasible report over the loosened polygon of the rows.

    The minimum-payment vertex alone is not enough: it can sit exactly on
    a strict decline boundary or drop an accept-boundary worker to float
    rounding.  So every polygon vertex is probed together with points
    pulled toward the centroid (strictly interior, where all non-strict
    rows hold with real slack), vertices are repaired off strict
    boundaries by the base-payment schedule, and each probe is evaluated
    honestly through the decision rule.
    """
    result = feasible_point(rows)
    if not result.feasible:
        return None
    vertices = list(result.vertices) or [result.witness]
    cx = sum(v[0] for v in vertices) / len(vertices)
    cy = sum(v[1] for v in vertices) / len(vertices)
    nudge = 1e-12 * scale

    points: list[tuple[float, float]] = []
    for v in vertices:
        repaired = repair_strict(v, rows, scale=scale)
        if repaired is not None:
            points.append(repaired)
            points.append((repaired[0] + nudge, repaired[1]))
            points.append((max(0.0, repaired[0] - nudge), repaired[1]))
        for t in (1e-6, 0.5):
            points.append((v[0] + t * (cx - v[0]), v[1] + t * (cy - v[1])))

    by_set: dict[tuple[int, ...], tuple[float, float, float]] = {}
    for p, q in points:
        accepted, spent = accepted_set(workers, (p, q))
        if spent > budget:
            continue
        entry = (spent, p, q)
        if accepted not in by_set or entry < by_set[accepted]:
            by_set[accepted] = entry

    best: CpSolveReport | None = None
    for _, p, q in by_set.values():
        report = make_report(workers, utility, p, q)
        if best is None or _better(report, best):
            best = report
    return best


def cp_subres(
    workers: Sequence[WorkerProfile],
    budget: float,
    utility: UtilityFunction,
    mode: str = "binary",
    diagnostics: bool = True,
) -> CpSolveReport:
    """Optimal common pricing for effort-subresponsive profiles.

    Every policy recruits a quality-rank interval [l, u] here.  For each
    upper end u the solver finds the best lower end: "binary" assumes
    feasibility is monotone in l and binary-searches the smallest feasible
    one, "linear" tries every l and keeps the best report, which is the
    audit guard for that assumption.
    """
    if budget < 0:
        raise ValueError("budget must be >= 0")
    if mode not in ("binary", "linear"):
        raise ValueError(f"unknown mode {mode!r}")
    if diagnostics and len(workers) >= 2:
        warn_if_off_regime(workers, Regime.EFFORT_SUBRESPONSIVE)
    n = len(workers)
    order = _quality_order(workers)
    r = [workers[i].quality for i in order]
    c = [workers[i].cost for i in order]
    scale = max([1.0, budget] + c)

    best = make_report(workers, utility, 0.0, 0.0)

    def attempt(lo: int, hi: int) -> CpSolveReport | None:
        return _candidate(workers, utility, budget, _picking_rows(r, c, lo, hi, budget), scale)

    for hi in range(n, 0, -1):
        if mode == "linear":
            for lo in range(1, hi + 1):
                report = attempt(lo, hi)
                if report is not None and _better(report, best):
                    best = report
        else:
            found: dict[int, CpSolveReport | None] = {}

            def feasible(lo: int) -> bool:
                if lo not in found:
                    found[lo] = attempt(lo, hi)
                return found[lo] is not None

            lo, up = 1, hi
            while lo < up:
                mid = (lo + up) // 2
                if feasible(mid):
                    up = mid
                else:
                    lo = mid + 1
            if feasible(lo):
                report = found[lo]
                if report is not None and _better(report, best):
                    best = report
    return best


def cp_res(
    workers: Sequence[WorkerProfile],
    budget: float,
    utility: UtilityFunction,
    mode: str = "binary",
    diagnostics: bool = True,
) -> CpSolveReport:
    """Optimal common pricing for effort-responsive profiles.

    The mirror of :func:`cp_subres` over blocking structures: the policy
    must make a quality-rank interval decline and everyone else accept.
    Scans the lower end l of the blocked interval; for each l, "binary"
    searches the smallest feasible upper end (the least blocking, so the
    most utility), "linear" tries them all.  The block-nobody candidate
    (accept everyone) is handled separately since it constrains all ranks.
    """
    if budget < 0:
        raise ValueError("budget must be >= 0")
    if mode not in ("binary", "linear"):
        raise ValueError(f"unknown mode {mode!r}")
    if diagnostics and len(workers) >= 2:
        warn_if_off_regime(workers, Regime.EFFORT_RESPONSIVE)
    n = len(workers)
    order = _quality_order(workers)
    r = [workers[i].quality for i in order]
    c = [workers[i].cost for i in order]
    scale = max([1.0, budget] + c)

    best = make_report(workers, utility, 0.0, 0.0)

    # block nobody: everyone accepts within budget
    rows = [HalfPlane(-1.0, -ri, -ci) for ri, ci in zip(r, c)]
    rows.append(HalfPlane(float(n), math.fsum(r), budget))
    report = _candidate(workers, utility, budget, rows, scale)
    if report is not None and _better(report, best):
        best = report

    def attempt(lo: int, hi: int) -> CpSolveReport | None:
        return _candidate(workers, utility, budget, _blocking_rows(r, c, lo, hi, budget), scale)

    for lo in range(1, n + 1):
        if mode == "linear":
            for hi in range(lo, n + 1):
                report = attempt(lo, hi)
                if report is not None and _better(report, best):
                    best = report
        else:
            found: dict[int, CpSolveReport | None] = {}

            def feasible(hi: int) -> bool:
                if hi not in found:
                    found[hi] = attempt(lo, hi)
                return found[hi] is not None

            low, up = lo, n
            while low < up:
                mid = (low + up) // 2
                if feasible(mid):
                    up = mid
                else:
                    low = mid + 1
            if feasible(low):
                report = found[low]
                if report is not None and _better(report, best):
                    best = report
    return best


def cp_no_bonus(
    workers: Sequence[WorkerProfile], budget: float, utility: UtilityFunction
) -> CpSolveReport:
    """Optimal common pricing with the bonus forced to zero.

    With q = 0 the accepted set is determined by the base alone, so the
    distinct costs are the only candidate bases; ties prefer the smaller
    base.
    """
    if budget < 0:
        raise ValueError("budget must be >= 0")
    candidates = sorted({0.0} | {w.cost for w in workers})
    best: CpSolveReport | None = None
    for p in candidates:
        report = make_report(workers, utility, p, 0.0)
        if report.spent > budget:
            continue
        if best is None or (report.utility_value, -p) > (best.utility_value, -best.policy.base):
            best = report
    assert best is not None  # p = 0 spends nothing
    return best


# ---------------------------------------------------------------------------
# Exact oracle
# ---------------------------------------------------------------------------


def cp_exact_oracle(
    workers: Sequence[WorkerProfile],
    budget: float,
    utility: UtilityFunction,
    max_n: int = ORACLE_LIMIT,
) -> CpSolveReport:
    """Exact optimum over all (p, q) >= 0, regime-free.

    The accepted set is piecewise constant over the arrangement of the
    lines p + r_i q = c_i, and as p grows at a fixed bonus the set fills
    in threshold order c_i - q r_i.  Sweeping q over every pairwise line
    crossing, axis crossing, their eps-neighborhoods and interval
    midpoints, and taking each threshold base payment (plus a one-ulp
    bump for boundary robustness) therefore visits every achievable
    accepted set at its cheapest attainable price.  Candidates are
    deduplicated per accepted set keeping the cheapest, then ranked by
    utility, spend, and lexicographic (p, q).
    """
    if budget < 0:
        raise ValueError("budget must be >= 0")
    n = len(workers)
    if n > max_n:
        raise SizeError(f"n={n} exceeds the oracle limit ({max_n})")
    if n == 0:
        return make_report(workers, utility, 0.0, 0.0)

    r = np.array([w.quality for w in workers])
    c = np.array([w.cost for w in workers])
    eps = 1e-9 * max(1.0, float(c.max()))
    margin = 1e-9 * max(1.0, budget, float(c.max()))

    critical = {0.0}
    for i in range(n):
        if r[i] > 0.0:
            critical.add(float(c[i] / r[i]))
        for j in range(i + 1, n):
            if r[i] != r[j]:
                t = float((c[i] - c[j]) / (r[i] - r[j]))
                if t > 0.0:
                    critical.add(t)
    crit = sorted(critical)
    samples = set()
    for t in crit:
        samples.add(t)
        samples.add(t + eps)
        if t - eps >= 0.0:
            samples.add(t - eps)
    samples.update((a + b) / 2.0 for a, b in zip(crit, crit[1:]))
    samples.add(crit[-1] + max(1.0, crit[-1]))

    # per accepted set: cheapest (spent, p, q) candidate seen
    by_mask: dict[bytes, tuple[float, float, float]] = {}
    for q in sorted(samples):
        d = c - q * r
        bases = np.maximum(d, 0.0)
        thresholds = np.unique(np.concatenate([[0.0], bases, np.nextafter(bases, np.inf)]))
        accept = thresholds[:, None] + q * r[None, :] >= c[None, :]
        spend = thresholds * accept.sum(axis=1) + q * (accept @ r)
        for t in range(len(thresholds)):
            if spend[t] > budget + margin:
                continue
            key = np.packbits(accept[t]).tobytes()
            entry = (float(spend[t]), float(thresholds[t]), q)
            if key not in by_mask or entry < by_mask[key]:
                by_mask[key] = entry

    masks = np.array(
        [np.unpackbits(np.frombuffer(key, dtype=np.uint8), count=n).astype(bool) for key in by_mask]
    )
    values = utility.evaluate_many(masks * r)
    ranked = sorted(
        zip(values, (v for v in by_mask.values())),
        key=lambda item: (-item[0], item[1]),
    )
    for _, (_, p, q) in ranked:
        report = make_report(workers, utility, p, q)
        if report.spent <= budget:
            return report
    return make_report(workers, utility, 0.0, 0.0)

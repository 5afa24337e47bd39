"""Exact feasibility for small half-plane systems in the (p, q) plane.

The common-pricing searches only ever ask "is there a nonnegative (p, q)
satisfying these few inequalities, some of them strict?".  With at most a
handful of rows, incremental polygon clipping against the nonnegative
quadrant is simpler and more robust than a general LP, and the strict
rows are handled afterwards by nudging the base payment.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

__all__ = ["HalfPlane", "FeasibilityResult", "feasible_point", "repair_strict"]

_TOL = 1e-12  # orientation tolerance on normalized coefficients
_BOUNDARY_TOL = 1e-9


@dataclass(frozen=True)
class HalfPlane:
    """The constraint a_p * p + a_q * q <= rhs (or < rhs when strict)."""

    a_p: float
    a_q: float
    rhs: float
    strict: bool = False

    def normalized(self) -> "HalfPlane":
        scale = max(abs(self.a_p), abs(self.a_q), abs(self.rhs))
        if scale == 0.0:
            return self
        return HalfPlane(self.a_p / scale, self.a_q / scale, self.rhs / scale, self.strict)

    def value(self, p: float, q: float) -> float:
        return self.a_p * p + self.a_q * q


@dataclass(frozen=True)
class FeasibilityResult:
    feasible: bool
    witness: tuple[float, float] | None
    on_strict_boundary: tuple[bool, ...]
    # all vertices of the clipped (loosened) polygon; callers that must
    # sidestep strict boundaries can probe its interior
    vertices: tuple[tuple[float, float], ...] = ()


def _clip(poly: list[tuple[float, float]], row: HalfPlane) -> list[tuple[float, float]]:
    """Keep the part of the polygon with row.value <= rhs (+ tolerance)."""
    if not poly:
        return poly
    out: list[tuple[float, float]] = []
    dists = [row.value(x, y) - row.rhs for (x, y) in poly]
    n = len(poly)
    for i in range(n):
        j = (i + 1) % n
        di, dj = dists[i], dists[j]
        inside_i = di <= _TOL
        inside_j = dj <= _TOL
        if inside_i:
            out.append(poly[i])
        if inside_i != inside_j:
            t = di / (di - dj)
            xi, yi = poly[i]
            xj, yj = poly[j]
            out.append((xi + t * (xj - xi), yi + t * (yj - yi)))
    # collapse near-duplicate vertices so degenerate slivers stay stable
    dedup: list[tuple[float, float]] = []
    for v in out:
        if all(abs(v[0] - w[0]) > 1e-13 or abs(v[1] - w[1]) > 1e-13 for w in dedup):
            dedup.append(v)
    return dedup


def _bounding_extent(rows: Sequence[HalfPlane]) -> float:
    """A box size guaranteed to contain every candidate vertex."""
    extent = 1.0
    for row in rows:
        for coef in (row.a_p, row.a_q):
            if abs(coef) > _TOL:
                extent = max(extent, abs(row.rhs / coef))
    for i in range(len(rows)):
        for j in range(i + 1, len(rows)):
            a, b = rows[i], rows[j]
            det = a.a_p * b.a_q - a.a_q * b.a_p
            if abs(det) > _TOL:
                p = (a.rhs * b.a_q - a.a_q * b.rhs) / det
                q = (a.a_p * b.rhs - a.rhs * b.a_p) / det
                extent = max(extent, abs(p), abs(q))
    return 10.0 * extent


def feasible_point(rows: Sequence[HalfPlane]) -> FeasibilityResult:
    """Intersect the loosened rows with the quadrant p, q >= 0.

    Strict rows are clipped as if non-strict; the result flags which
    strict rows the witness satisfies only with equality, so the caller
    can run :func:`repair_strict`.  The witness is the polygon vertex with
    the smallest p + q (then smallest p), biasing toward cheap policies.
    """
    normalized = [row.normalized() for row in rows]
    for row in normalized:
        if abs(row.a_p) <= _TOL and abs(row.a_q) <= _TOL:
            # pure constant check
            if 0.0 > row.rhs + _TOL or (row.strict and not 0.0 < row.rhs):
                return FeasibilityResult(False, None, tuple(r.strict for r in rows))

    extent = _bounding_extent(normalized)
    poly = [(0.0, 0.0), (extent, 0.0), (extent, extent), (0.0, extent)]
    for row in normalized:
        if abs(row.a_p) <= _TOL and abs(row.a_q) <= _TOL:
            continue
        poly = _clip(poly, row)
        if not poly:
            return FeasibilityResult(False, None, tuple(False for _ in rows))

    poly = [(max(0.0, v[0]), max(0.0, v[1])) for v in poly]
    witness = min(poly, key=lambda v: (v[0] + v[1], v[0]))
    flags = tuple(
        row.strict and abs(row.value(*witness) - row.rhs) <= _BOUNDARY_TOL
        for row in normalized
    )
    return FeasibilityResult(True, witness, flags, tuple(poly))


def _satisfies(point: tuple[float, float], rows: Sequence[HalfPlane]) -> bool:
    # exact comparisons: a tolerance here would let contradictory systems
    # (the duplicated-profile degeneracy) "repair" at the dust level
    p, q = point
    if p < 0.0 or q < 0.0:
        return False
    for row in rows:
        v = row.value(p, q)
        if row.strict:
            if not v < row.rhs:
                return False
        elif v > row.rhs:
            return False
    return True


def repair_strict(
    witness: tuple[float, float],
    rows: Sequence[HalfPlane],
    scale: float | None = None,
) -> tuple[float, float] | None:
    """Move a loosened-system witness off the strict boundaries.

    Decreases p on a geometric schedule eps0 * 2^-k until every strict row
    holds strictly while the non-strict rows still hold.  Returns None
    after 60 halvings; that marks a boundary-degenerate system (two
    adjacent workers sharing a profile), where the exact structure is
    unattainable for any policy.
    """
    normalized = [row.normalized() for row in rows]
    if _satisfies(witness, normalized):
        return witness
    if scale is None:
        scale = max([1.0] + [abs(r.rhs) for r in rows])
    eps0 = 1e-6 * scale
    p, q = witness
    for k in range(60):
        candidate = (p - eps0 * 2.0**-k, q)
        if candidate[0] >= 0.0 and _satisfies(candidate, normalized):
            return candidate
    return None

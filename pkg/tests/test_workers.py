import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from crowdprice import (
    CommonPolicy,
    CostQualityCurve,
    Regime,
    WorkerProfile,
    classify_regime,
    decide,
    expected_payment,
    sort_by_bang_per_buck,
)
from crowdprice.workers import load_workers_csv, load_workers_json, workers_to_json


class TestDecide:
    def test_accepts_when_payment_covers_cost(self):
        w = WorkerProfile(quality=0.5, cost=0.25)
        assert decide(w, CommonPolicy(base=0.1, bonus=0.4))  # 0.1 + 0.2 >= 0.25

    def test_low_quality_declines_pure_bonus(self):
        # the worst-case construction relies on this: a (0.1, 1) cherry
        # declines (0, 1) while a (2, 2) expert accepts
        assert not decide(WorkerProfile(0.1, 1.0), (0.0, 1.0))
        assert decide(WorkerProfile(2.0, 2.0), (0.0, 1.0))

    def test_boundary_equality_accepts(self):
        w = WorkerProfile(quality=0.37, cost=0.81)
        assert decide(w, (w.cost, 0.0))

    @given(
        st.floats(0.0, 2.0),
        st.floats(0.0, 1.0),
        st.floats(0.0, 1.0),
        st.floats(0.0, 0.5),
        st.floats(0.0, 0.5),
    )
    def test_monotone_in_payments(self, r, c, p, dp, dq):
        w = WorkerProfile(r, c)
        if decide(w, (p, 0.3)):
            assert decide(w, (p + dp, 0.3 + dq))


class TestExpectedPayment:
    def test_high_quality_worker_gets_bonus_value(self):
        assert expected_payment(WorkerProfile(2.0, 2.0), (0.0, 1.0)) == 2.0

    def test_declining_worker_costs_nothing(self):
        assert expected_payment(WorkerProfile(0.1, 1.0), (0.0, 1.0)) == 0.0

    def test_fractional_bonus(self):
        pay = expected_payment(WorkerProfile(0.5, 0.25), (0.0, 5.0 / 7.0))
        assert pay == pytest.approx(5.0 / 14.0, abs=1e-12)

    def test_zero_exactly_when_declining(self):
        rng = np.random.default_rng(3)
        for _ in range(200):
            w = WorkerProfile(float(rng.uniform(0, 1)), float(rng.uniform(0, 1)))
            pq = (float(rng.uniform(0, 1)), float(rng.uniform(0, 1)))
            assert (expected_payment(w, pq) == 0.0) == (not decide(w, pq))


class TestClassifyRegime:
    def test_sqrt_is_unresponsive(self):
        curve = CostQualityCurve(f=math.sqrt)
        assert classify_regime(curve, (0.1, 1.0)) is Regime.EFFORT_UNRESPONSIVE

    def test_square_is_responsive(self):
        curve = CostQualityCurve(f=lambda x: x * x, fprime=lambda x: 2 * x, fsecond=lambda x: 2.0)
        assert classify_regime(curve, (0.1, 1.0)) is Regime.EFFORT_RESPONSIVE

    def test_linear_ties_resolve_to_unresponsive(self):
        curve = CostQualityCurve(f=lambda x: x, fprime=lambda x: 1.0, fsecond=lambda x: 0.0)
        assert classify_regime(curve, (0.1, 1.0)) is Regime.EFFORT_UNRESPONSIVE

    def test_concave_super_curve_is_subresponsive(self):
        curve = CostQualityCurve(f=lambda x: x**0.9 - 0.12)
        assert classify_regime(curve, (0.3, 0.95)) is Regime.EFFORT_SUBRESPONSIVE

    def test_scaling_does_not_change_class(self):
        for alpha in (0.25, 3.0):
            curve = CostQualityCurve(f=lambda x, a=alpha: a * math.sqrt(x))
            assert classify_regime(curve, (0.1, 1.0)) is Regime.EFFORT_UNRESPONSIVE

    def test_domain_touching_zero_rejected(self):
        with pytest.raises(ValueError):
            classify_regime(CostQualityCurve(f=math.sqrt), (0.0, 1.0))

    def test_too_few_samples_rejected(self):
        with pytest.raises(ValueError):
            classify_regime(CostQualityCurve(f=math.sqrt), (0.1, 1.0), samples=1)


class TestBangPerBuckOrder:
    def test_worked_example(self):
        workers = [WorkerProfile(0.9, 0.3), WorkerProfile(0.5, 0.25), WorkerProfile(0.8, 0.5)]
        # ratios 3, 2, 1.6
        assert sort_by_bang_per_buck(workers) == [0, 1, 2]

    def test_equal_ratios_keep_input_order(self):
        workers = [WorkerProfile(0.2, 0.4), WorkerProfile(0.1, 0.2), WorkerProfile(0.3, 0.6)]
        assert sort_by_bang_per_buck(workers) == [0, 1, 2]

    def test_zero_cost_first(self):
        workers = [WorkerProfile(0.1, 0.5), WorkerProfile(0.0, 0.0), WorkerProfile(0.9, 0.0)]
        assert sort_by_bang_per_buck(workers)[:2] == [1, 2]

    def test_single_worker(self):
        assert sort_by_bang_per_buck([WorkerProfile(0.4, 0.2)]) == [0]

    @given(st.lists(st.tuples(st.floats(0, 1), st.floats(0.01, 1)), min_size=1, max_size=12))
    def test_is_an_idempotent_permutation(self, pairs):
        workers = [WorkerProfile(r, c) for r, c in pairs]
        order = sort_by_bang_per_buck(workers)
        assert sorted(order) == list(range(len(workers)))
        resorted = [workers[i] for i in order]
        assert sort_by_bang_per_buck(resorted) == list(range(len(workers)))


class TestIngest:
    CSV = "id,quality,cost\n1,0.9,0.3\n2,0.5,0.25\n"

    def test_csv_round_trip(self):
        workers = load_workers_csv(self.CSV)
        assert workers == [WorkerProfile(0.9, 0.3, 1), WorkerProfile(0.5, 0.25, 2)]
        again = load_workers_json(workers_to_json(workers))
        assert again == workers

    def test_header_required(self):
        with pytest.raises(ValueError, match="header"):
            load_workers_csv("1,0.9,0.3\n")

    def test_strict_mode_rejects_quality_above_one(self):
        with pytest.raises(ValueError, match="strict"):
            load_workers_csv("id,quality,cost\n1,2.0,2.0\n", strict=True)
        # default permits the worst-case profiles
        assert load_workers_csv("id,quality,cost\n1,2.0,2.0\n")[0].quality == 2.0

    def test_negative_values_rejected(self):
        with pytest.raises(ValueError):
            load_workers_csv("id,quality,cost\n1,-0.1,0.3\n")

import math

import numpy as np
import pytest

from smoothgreed.instances import gen_adwords_triangular, gen_logdet_stream, gen_lp_random
from smoothgreed.objectives import (
    DiagMap,
    FeasibleSet,
    LogDetObjective,
    PenaltyLPObjective,
    RankOneMap,
    SeparableObjective,
    StackedMap,
    Step,
    dual_objective,
)
from smoothgreed.online import (
    certify,
    duality_gap_diagnostics,
    run_sequential,
    run_simultaneous,
)
from smoothgreed.scalar import Cap, Linear, Sqrt
from smoothgreed.smoothing import (
    adwords_closed_form_smoothing,
    nesterov_logdet_smoothing,
    nesterov_penalty_smoothing,
)

from oracles import enumerate_offline_best, logdet_relaxation_grid

E = math.e


def adwords_obj(n, smoothed=False):
    if smoothed:
        s = adwords_closed_form_smoothing()
        return SeparableObjective([Cap(1.0)] * n, smoothed=s, certified_beta=s.beta_exact)
    return SeparableObjective([Cap(1.0)] * n)


def replay_states(obj, steps, trace):
    """Accumulated points before and after each step, from the recorded x."""
    if isinstance(obj, SeparableObjective):
        u = np.zeros(obj.n)
    else:
        u = np.zeros(obj.n + 1)
    out = []
    for st, rec in zip(steps, trace.records):
        prev = u.copy()
        u = u + st.A.apply(rec.x)
        out.append((prev, u.copy()))
    return out


class TestToyRuns:
    def test_linear_single_step(self):
        obj = SeparableObjective([Linear(1.0)])
        steps = [Step(DiagMap(np.array([1.0])), FeasibleSet("simplex", 1))]
        for run in (run_sequential, run_simultaneous):
            tr = run(obj, steps)
            assert tr.P_orig == pytest.approx(1.0, abs=1e-12)
            assert tr.D_alg == pytest.approx(1.0, abs=1e-12)
            assert tr.ratio_lb == pytest.approx(1.0, abs=1e-9)

    def test_two_advertiser_hand_enumeration(self):
        # step 1 bids (1, 0); step 2 bids (1, 1); greedy assigns both to
        # the first advertiser's column, wasting the second step
        obj = adwords_obj(2)
        steps = [Step(DiagMap(np.array([1.0, 0.0])), FeasibleSet("simplex", 2)),
                 Step(DiagMap(np.array([1.0, 1.0])), FeasibleSet("simplex", 2))]
        tr = run_sequential(obj, steps)
        assert tr.P_orig == pytest.approx(2.0)
        assert tr.D_alg == pytest.approx(4.0)
        best = enumerate_offline_best(obj.value, steps, frac=4)
        assert best == pytest.approx(2.0)

    def test_classic_half_pattern(self):
        # phase one bids on both, phase two only on the first column
        obj = adwords_obj(2)
        steps = [Step(DiagMap(np.array([1.0, 1.0])), FeasibleSet("simplex", 2)),
                 Step(DiagMap(np.array([1.0, 0.0])), FeasibleSet("simplex", 2))]
        tr = run_simultaneous(obj, steps)
        best = enumerate_offline_best(obj.value, steps, frac=2)
        assert best == pytest.approx(2.0)
        assert tr.P_orig / best == pytest.approx(0.5)

    def test_boundary_shift_for_root_coordinates(self):
        obj = SeparableObjective([Sqrt()] * 2)
        steps = [Step(DiagMap(np.array([0.5, 0.5])), FeasibleSet("simplex", 2))]
        tr = run_sequential(obj, steps)
        assert tr.interior_shift
        assert tr.P_orig > 0


class TestEngineInvariants:
    def test_simultaneous_gains_nonnegative(self):
        for smoothed in (False, True):
            obj = adwords_obj(6, smoothed)
            inst = gen_adwords_triangular(6, 4)
            tr = run_simultaneous(obj, inst.steps)
            assert float(np.min(tr.gains())) >= -1e-12

    def test_dual_iterates_decrease(self):
        inst = gen_adwords_triangular(5, 3)
        for smoothed in (False, True):
            obj = adwords_obj(5, smoothed)
            for run in (run_sequential, run_simultaneous):
                tr = run(obj, inst.steps)
                prev = None
                for state_prev, state_post in replay_states(obj, inst.steps, tr):
                    y = obj.engine_grad_lo(state_post)
                    if prev is not None:
                        assert np.all(y <= prev + 1e-12)
                    prev = y

    def test_frank_wolfe_consistency(self):
        # each sequential step must equal the linearized argmax at the
        # previous point, recomputed here from scratch
        obj = adwords_obj(5, smoothed=True)
        inst = gen_adwords_triangular(5, 3)
        tr = run_sequential(obj, inst.steps)
        for st, rec, (prev, _) in zip(inst.steps, tr.records, replay_states(obj, inst.steps, tr)):
            grad = obj.engine_grad_lo(prev)
            _, x_ref = st.F.support(st.A.a * grad)
            np.testing.assert_allclose(rec.x, x_ref, atol=0)

    def test_determinism_bit_identical(self):
        inst = gen_lp_random(4, 12, 2, 0.7, seed=42)
        obj = PenaltyLPObjective(4, inst.extras["l"], inst.extras["theta"])
        t1 = run_simultaneous(obj, inst.steps)
        t2 = run_simultaneous(obj, inst.steps)
        assert t1.P_orig == t2.P_orig and t1.D_alg == t2.D_alg
        np.testing.assert_array_equal(t1.u_final, t2.u_final)

    def test_saddle_residuals_tiny(self):
        inst = gen_adwords_triangular(8, 5)
        tr = run_simultaneous(adwords_obj(8, True), inst.steps)
        assert tr.saddle_residual <= 1e-10

    def test_waterfill_matches_brute_maximization(self):
        # non-uniform bids: every simultaneous step must attain the exact
        # coordinate maximum, checked against a dense simplex grid
        rng = np.random.default_rng(np.random.Philox(key=17))
        grid = np.linspace(0.0, 1.0, 201)
        xx, yy = np.meshgrid(grid, grid)
        mask = xx + yy <= 1.0 + 1e-12
        pts = np.stack([xx[mask], yy[mask]], axis=1)
        for smoothed in (False, True):
            obj = adwords_obj(2, smoothed)
            f = obj.engine_coords[0]
            for trial in range(25):
                a = rng.uniform(0.05, 1.2, size=2)
                w = rng.uniform(0.0, 1.2, size=2)
                steps = [Step(DiagMap(w.copy()), FeasibleSet("simplex", 2)),
                         Step(DiagMap(a), FeasibleSet("simplex", 2))]
                # first step plants the prior w by sending the full simplex
                # mass through a box-like split; simpler: run both steps and
                # compare the second step's gain with the brute optimum
                tr = run_simultaneous(obj, steps)
                u_prev = steps[0].A.a * tr.records[0].x
                brute = float(np.max(
                    np.sum(np.asarray(f.value(u_prev[None, :] + a[None, :] * pts)),
                           axis=1)))
                achieved = float(np.sum(np.asarray(
                    f.value(u_prev + a * tr.records[1].x))))
                assert achieved >= brute - 1e-8, (smoothed, trial, achieved, brute)
                assert tr.saddle_residual <= 1e-10


class TestPackingRuns:
    def test_unsmoothed_certificates(self):
        for seed in range(4):
            inst = gen_lp_random(4, 15, 3, 0.7, seed=seed)
            obj = PenaltyLPObjective(4, inst.extras["l"], inst.extras["theta"])
            tr = run_simultaneous(obj, inst.steps)
            rep = certify(tr, obj, inst.steps)
            gap = duality_gap_diagnostics(tr, obj)
            assert rep.passed and gap.passed, (seed, rep)

    def test_weak_duality_at_final_dual(self):
        inst = gen_lp_random(3, 4, 2, 0.9, seed=1)
        obj = PenaltyLPObjective(3, inst.extras["l"], inst.extras["theta"])
        tr = run_simultaneous(obj, inst.steps)
        best = enumerate_offline_best(obj.value, inst.steps, frac=2)
        assert dual_objective(obj, inst.steps, tr.y_final) >= best - 1e-9
        assert tr.D_alg >= best - 1e-9

    def test_smoothed_feasibility_preserved(self):
        # with the penalty slope above the dual bound, the smoothed run
        # never over-consumes any budget coordinate
        rng = np.random.default_rng(5)
        for seed in range(3):
            inst = gen_lp_random(3, 40, 1, 1.0, seed=seed)
            l, theta = inst.extras["l"], inst.extras["theta"]
            pen = nesterov_penalty_smoothing(l, theta)
            obj = PenaltyLPObjective(3, l, theta, smoothed_penalty=pen)
            tr = run_simultaneous(obj, inst.steps)
            assert float(np.max(tr.u_final[1:])) <= 1.0 + 1e-9
            rep = certify(tr, obj, inst.steps)
            assert rep.identity_ok

    def test_sequential_packing_runs(self):
        inst = gen_lp_random(4, 15, 2, 0.8, seed=7)
        obj = PenaltyLPObjective(4, inst.extras["l"], inst.extras["theta"])
        tr = run_sequential(obj, inst.steps)
        rep = certify(tr, obj, inst.steps)
        gap = duality_gap_diagnostics(tr, obj)
        assert rep.passed and gap.passed

    def test_lp_ball_penalty_run(self):
        inst = gen_lp_random(3, 12, 2, 0.8, seed=11)
        obj = PenaltyLPObjective(3, inst.extras["l"], inst.extras["theta"],
                                 penalty_kind="lp_ball", p=2.0)
        tr = run_sequential(obj, inst.steps)
        gap = duality_gap_diagnostics(tr, obj)
        assert gap.passed
        rep = certify(tr, obj, inst.steps)
        assert rep.identity_ok


class TestDeterminantRuns:
    def test_identical_vectors_match_grid_enumeration(self):
        a = np.array([1.0, 1.0, 0.0]) / math.sqrt(2)
        A0 = np.eye(3)
        steps = [Step(RankOneMap(a), FeasibleSet("unit_interval")) for _ in range(3)]
        obj = LogDetObjective(A0, b=2.0)
        tr = run_simultaneous(obj, steps)
        ref = logdet_relaxation_grid(A0, [a, a, a], 2.0, grid=20)
        assert tr.P_orig == pytest.approx(ref, abs=1e-9)
        assert tr.u_final[1] == pytest.approx(2.0, abs=1e-9)

    def test_smoothed_stream_certificates(self):
        for seed in range(3):
            inst = gen_logdet_stream(3, 15, 2.0, seed=seed)
            A0 = np.asarray(inst.extras["A0"])
            pen = nesterov_logdet_smoothing(3, inst.extras["l"], 2.0)
            obj = LogDetObjective(A0, 2.0, l=inst.extras["l"], smoothed_budget=pen)
            for run in (run_simultaneous, run_sequential):
                tr = run(obj, inst.steps)
                rep = certify(tr, obj, inst.steps)
                gap = duality_gap_diagnostics(tr, obj)
                assert rep.passed and gap.passed, (seed, run, rep)

    def test_unsmoothed_stream_gap(self):
        inst = gen_logdet_stream(4, 20, 3.0, seed=2)
        obj = LogDetObjective(np.asarray(inst.extras["A0"]), 3.0, l=inst.extras["l"])
        tr = run_simultaneous(obj, inst.steps)
        gap = duality_gap_diagnostics(tr, obj)
        assert gap.passed
        assert certify(tr, obj, inst.steps).identity_ok


class TestCertificates:
    def test_unsmoothed_adwords_never_below_half(self):
        for n, pl in ((4, 2), (6, 3), (10, 4)):
            inst = gen_adwords_triangular(n, pl)
            tr = run_simultaneous(adwords_obj(n), inst.steps)
            rep = certify(tr, obj := adwords_obj(n), inst.steps)
            assert rep.ratio_lb >= 0.5 - 1e-9
            assert rep.passed

    def test_smoothed_adwords_never_below_one_minus_inv_e(self):
        for n, pl in ((4, 2), (6, 3), (10, 4)):
            inst = gen_adwords_triangular(n, pl)
            obj = adwords_obj(n, smoothed=True)
            tr = run_simultaneous(obj, inst.steps)
            rep = certify(tr, obj, inst.steps)
            assert rep.ratio_lb >= (1 - 1 / E) - 1e-9
            assert rep.passed

    def test_sequential_corrected_bound(self):
        inst = gen_adwords_triangular(6, 1)  # large bids, large correction
        obj = adwords_obj(6)
        tr = run_sequential(obj, inst.steps)
        rep = certify(tr, obj, inst.steps)
        assert tr.corr <= 1e-12
        assert rep.passed

    def test_gap_identities_all_families(self):
        inst = gen_adwords_triangular(5, 3)
        for smoothed in (False, True):
            obj = adwords_obj(5, smoothed)
            for run in (run_sequential, run_simultaneous):
                tr = run(obj, inst.steps)
                assert duality_gap_diagnostics(tr, obj).passed

    def test_regret_form_with_lipschitz_surrogate(self):
        obj = adwords_obj(6, smoothed=True)
        inst = gen_adwords_triangular(6, 5)
        tr = run_sequential(obj, inst.steps)
        sm = obj.smoothed[0]
        mu = sm.h / float(np.max(np.abs(np.diff(sm.y))))   # 1 / max curvature
        assert mu == pytest.approx((E - 1) / E, abs=1e-3)
        gap = duality_gap_diagnostics(tr, obj, mu=mu)
        assert gap.passed and gap.passed_regret

    def test_sequential_smoothed_large_adversary(self):
        # vanishing bid-to-budget ratio: the sequential engine with the
        # designed smoothing clears 0.61 on the full-size adversary
        inst = gen_adwords_triangular(100, 50)
        obj = adwords_obj(100, smoothed=True)
        tr = run_sequential(obj, inst.steps, keep_records=False)
        assert tr.P_orig / 100.0 >= 0.61
        assert certify(tr, obj, inst.steps).passed

    def test_smoothed_logdet_realized_alpha_floor(self):
        # the realized smoothed ratio parameter never falls below the
        # entropy-smoothing guarantee on simultaneous runs
        for seed in range(4):
            inst = gen_logdet_stream(4, 15, 2.0, seed=seed)
            A0 = np.asarray(inst.extras["A0"])
            pen = nesterov_logdet_smoothing(4, inst.extras["l"], 2.0)
            obj = LogDetObjective(A0, 2.0, l=inst.extras["l"], smoothed_budget=pen)
            tr = run_simultaneous(obj, inst.steps)
            if tr.P_orig <= 0:
                continue
            alpha_realized = 1.0 + (obj.conj_orig(tr.y_final) - tr.P_engine) / tr.P_orig
            floor = -(1.0 + 1.0 / (E - 1.0)) * pen.gamma
            assert alpha_realized >= floor - 1e-9

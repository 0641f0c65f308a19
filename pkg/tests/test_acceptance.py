"""Acceptance criteria, one test per criterion, each printing a verdict line.

The figure-scale suites are executed once via module fixtures and reused;
the determinism criterion reruns every suite a second time and compares
traces with the wall-clock column masked.
"""

import math
import time
from pathlib import Path

import numpy as np
import pytest

from layerbcd.activations import leaky_relu, relu
from layerbcd.bounds import (BoundInputs, capacity_r_f, generalization_gap_bound,
                             output_range_m, rademacher_bound, verify_norm_premise)
from layerbcd.data import TeacherConfig, gen_teacher_data
from layerbcd.gradcheck import run_grad_check
from layerbcd.init import init_state_monotone, init_state_relu
from layerbcd.linalg import min_singular_value, operator_norm, subseed
from layerbcd.network import NetworkShape, output_residuals, predict_batch
from layerbcd.schedule import InstanceStats, measure_stats, schedule_monotone, schedule_relu
from layerbcd.suites import deep_depths, fig2, fig3, lemma62_mc, tiny_convergence
from layerbcd.trace import read_trace, traces_equal_ignoring_wall
from layerbcd.train_monotone import (hidden_aux_sweep, outer_step, train,
                                     update_first_weights, update_hidden_weights,
                                     update_output_aux, update_output_weights)
from layerbcd.train_relu import train_relu

import dataclasses


def _verdict(num: int, ok: bool, detail: str) -> None:
    print(f"[criterion {num:02d}] {'PASS' if ok else 'FAIL'}: {detail}")
    assert ok, detail


@pytest.fixture(scope="module")
def out_root(tmp_path_factory):
    return tmp_path_factory.mktemp("acceptance")


@pytest.fixture(scope="module")
def tiny_problem():
    cfg = TeacherConfig(d_in=16, hidden=6, activation="leaky_relu:0.5", seed=7)
    ds = gen_teacher_data(8, cfg)
    shape = NetworkShape(16, 6, 3, 8)
    act = leaky_relu(0.5)
    state = init_state_monotone(shape, ds.x, act, seed=7)
    sched = schedule_monotone(measure_stats(state, ds.x, ds.y, act, 1.0, 1e-3)).schedule
    return ds, shape, act, sched


@pytest.fixture(scope="module")
def tiny_run(tiny_problem):
    """Criterion-1 run, instrumented with per-iteration spectral probes."""
    ds, shape, act, sched = tiny_problem
    probes = {"sigma_min": [], "sigma_max": []}

    def probe(k, state, loss):
        probes["sigma_min"].append(min(min_singular_value(w) for w in state.weights[1:]))
        probes["sigma_max"].append(max(operator_norm(w) for w in state.weights[1:]))

    t0 = time.perf_counter()
    state, trace = train(ds.x, ds.y, shape, sched, act, seed=7, on_iteration=probe)
    wall = time.perf_counter() - t0
    return state, trace, probes, wall


@pytest.fixture(scope="module")
def fig2_result(out_root):
    return fig2(out_root / "fig2_a"), out_root


@pytest.fixture(scope="module")
def fig3_result(out_root):
    return fig3(out_root / "fig3_a"), out_root


@pytest.fixture(scope="module")
def depths_result(out_root):
    return deep_depths(out_root / "depths_a"), out_root


def test_criterion_01_tiny_instance_global_convergence(tiny_run):
    state, trace, probes, wall = tiny_run
    final = trace[-1].loss.total
    _verdict(1, final <= 1e-3 and wall <= 60.0,
             f"final loss {final:.3e} <= 1e-3 in {wall:.1f}s (limit 60s)")


def test_criterion_02_svb_reproduction(fig2_result):
    result, _ = fig2_result
    print(result.report())
    _verdict(2, result.ok, "unit-step runs monotone and clipped runs >=10x below unclipped")


def test_criterion_03_skip_reproduction(fig3_result):
    result, _ = fig3_result
    print(result.report())
    _verdict(3, result.ok, "skip runs monotone and no-skip finals >=100x above")


def test_criterion_04_output_contraction_exactness(tiny_problem):
    ds, shape, act, sched = tiny_problem
    state = init_state_monotone(shape, ds.x, act, seed=7)
    eff = sched.effective(shape.n)
    worst = 0.0
    for _ in range(50):
        update_output_weights(state, ds.y, eff.eta_w1)
        w = state.weights[-1]
        factor = 1.0 - 2.0 * eff.eta_v * float(np.sum(w * w))
        before = output_residuals(state, ds.y)
        update_output_aux(state, ds.y, eff.eta_v)
        after = output_residuals(state, ds.y)
        worst = max(worst, float(np.max(np.abs(after - factor * before)
                                        / np.maximum(np.abs(factor * before), 1e-300))))
        for j in range(shape.L - 1, 1, -1):
            update_hidden_weights(state, j, eff.eta_w1, eff.gamma, act)
            hidden_aux_sweep(state, j, eff.eta_v, eff.gamma, eff.k_v, act)
        update_first_weights(state, ds.x, eff.eta_w2, eff.gamma, eff.k_w, act)
    _verdict(4, worst <= 1e-12, f"worst relative contraction error {worst:.2e} <= 1e-12")


def test_criterion_05_weight_window_maintenance(tiny_run):
    _, _, probes, _ = tiny_run
    lo, hi = min(probes["sigma_min"]), max(probes["sigma_max"])
    monotone_ok = lo >= 0.5 and hi <= 2.0

    cfg = TeacherConfig(d_in=16, hidden=6, activation="relu", seed=11)
    ds = gen_teacher_data(8, cfg)
    shape = NetworkShape(16, 6, 3, 8)
    state, _ = init_state_relu(shape, ds.x, seed=11)
    sched = schedule_relu(measure_stats(state, ds.x, ds.y, relu(), 1.0, 1e-3)).schedule
    worst = [0.0]

    def probe(k, st, loss):
        worst[0] = max(worst[0], max(operator_norm(w) for w in st.weights[1:-1]))

    train_relu(ds.x, ds.y, shape, sched, seed=11, on_iteration=probe)
    relu_ok = worst[0] <= 1.0 / 3.0 + 1e-9
    _verdict(5, monotone_ok and relu_ok,
             f"monotone window [{lo:.3f}, {hi:.3f}] within [0.5, 2]; "
             f"relu hidden norm max {worst[0]:.3f} <= 1/3")


def test_criterion_06_gradient_suite():
    report = run_grad_check(seed=0, trials=100)
    worst = max(report.max_rel_err.values())
    _verdict(6, report.passed, f"max relative error over all kinds {worst:.2e} <= 1e-6")


def test_criterion_07_sign_split_monte_carlo(out_root):
    result = lemma62_mc(out_root / "mc_a")
    print(result.report())
    _verdict(7, result.ok, "small-mass frequency and mixed-sign frequencies in band")


def test_criterion_08_bound_and_schedule_arithmetic(out_root):
    inputs = BoundInputs(x_norm=1.0, n=4, r=2, L=2, d_in=4, b_x=1.0, b_y=1.0,
                         ell=1.0, delta=0.05)
    expected_rf = 4 * 16 * 8 * math.log(8.0) * math.log(4.0)
    rf_ok = abs(capacity_r_f(inputs) - expected_rf) <= 1e-12 * expected_rf
    expected_rad = 4.0 / 8.0 + math.log(2.0) * 12.0 * math.sqrt(expected_rf) / 4.0
    rad_ok = abs(rademacher_bound(inputs) - expected_rad) <= 1e-12 * expected_rad
    m_inputs = dataclasses.replace(inputs, L=3)
    m_ok = abs(output_range_m(m_inputs) - 9.0) <= 1e-12 * 9.0

    stats = InstanceStats(s=2.0, r_total=3.0, r_max=1.5, max_x_sq=20.0, x_op_sq=40.0,
                          c_v=50.0, w_min_sq=0.5, alpha=0.5, ell=1.0, gamma=1.0,
                          L=3, r=6, n=8, epsilon=0.003)
    mono = schedule_monotone(stats).schedule
    rel = schedule_relu(stats).schedule
    sched_ok = (mono.eta_v == 0.015625 and mono.k_outer == 1025
                and abs(rel.eta_v - 1.0 / 12.0) <= 1e-12 / 12.0 and rel.k_outer == 49)

    covered = 0
    for seed in (500, 501, 502, 503, 504):
        cfg = TeacherConfig(d_in=16, hidden=6, activation="leaky_relu:0.5", seed=seed)
        train_ds = gen_teacher_data(8, cfg)
        test_ds = gen_teacher_data(64, cfg, x_seed=subseed(seed, 77))
        shape = NetworkShape(16, 6, 3, 8)
        act = leaky_relu(0.5)
        probe = init_state_monotone(shape, train_ds.x, act, seed=seed)
        sched = schedule_monotone(measure_stats(probe, train_ds.x, train_ds.y, act,
                                                1.0, 1e-3)).schedule
        sched = dataclasses.replace(sched, k_outer=200)
        state, _ = train(train_ds.x, train_ds.y, shape, sched, act, seed=seed)
        assert verify_norm_premise(state.weights)
        b_x = math.sqrt(max(float(np.max(np.sum(d.x ** 2, axis=1)))
                            for d in (train_ds, test_ds)))
        b_y = max(float(np.max(np.abs(d.y))) for d in (train_ds, test_ds))
        inputs = BoundInputs(x_norm=operator_norm(train_ds.x), n=train_ds.n, r=6, L=3,
                             d_in=16, b_x=b_x, b_y=b_y, ell=1.0, delta=0.05)
        bound = generalization_gap_bound(inputs).bound
        train_mse = float(np.mean((predict_batch(state.weights, train_ds.x, act)
                                   - train_ds.y) ** 2))
        test_mse = float(np.mean((predict_batch(state.weights, test_ds.x, act)
                                  - test_ds.y) ** 2))
        if test_mse - train_mse <= bound:
            covered += 1
    gap_ok = covered == 5
    _verdict(8, rf_ok and rad_ok and m_ok and sched_ok and gap_ok,
             f"hand values exact to 1e-12; gap covered on {covered}/5 instances")


def test_criterion_09_depth_sweep(depths_result):
    result, _ = depths_result
    print(result.report())
    _verdict(9, result.ok, "loss non-increasing at depths 4, 8, 12")


def _collect_traces(root: Path) -> dict:
    return {p.relative_to(root): p for p in sorted(root.rglob("trace.csv"))}


def test_criterion_10_suite_determinism(out_root, fig2_result, fig3_result, depths_result):
    pairs = []
    tiny_convergence(out_root / "tiny_a")
    tiny_convergence(out_root / "tiny_b")
    pairs.append(("tiny-convergence", out_root / "tiny_a", out_root / "tiny_b"))
    fig2(out_root / "fig2_b")
    pairs.append(("fig2", out_root / "fig2_a", out_root / "fig2_b"))
    fig3(out_root / "fig3_b")
    pairs.append(("fig3", out_root / "fig3_a", out_root / "fig3_b"))
    deep_depths(out_root / "depths_b")
    pairs.append(("deep-depths", out_root / "depths_a", out_root / "depths_b"))
    lemma62_mc(out_root / "mc_a2")
    lemma62_mc(out_root / "mc_b")
    ok = (out_root / "mc_a2" / "lemma62_mc.txt").read_bytes() == \
         (out_root / "mc_b" / "lemma62_mc.txt").read_bytes()
    detail = []
    for name, a, b in pairs:
        ta, tb = _collect_traces(a), _collect_traces(b)
        same = list(ta) == list(tb) and all(
            traces_equal_ignoring_wall(read_trace(ta[k]), read_trace(tb[k])) for k in ta)
        ok &= same
        detail.append(f"{name}:{'=' if same else '!='}({len(ta)} traces)")
    _verdict(10, ok, "repeat runs identical up to wall clock: " + " ".join(detail))

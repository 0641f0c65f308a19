"""Named end-to-end experiments with pinned seeds and pass/fail criteria.

Each suite writes its run artifacts under the output directory, prints one
line per criterion, and reports overall success. The figure-scale
reproductions run far outside the certified schedules (unit step sizes
with sample-normalized weight updates), matching the desk experiments the
package reproduces.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .config import RunConfig
from .linalg import gaussian_matrix, subseed
from .runner import RunResult, run_train
from .train_relu import output_row_stats

SUITE_NAMES = ("tiny-convergence", "fig2", "fig3", "deep-depths", "lemma62-mc")

UPTICK_SLACK = 1e-12
FIG_SEEDS = (101, 102, 103, 104, 105)
FIG_K_OUTER = 40

# Step-size conventions for the figure-scale reproductions. Weight steps are
# sample-normalized (mean-over-samples); the per-sample aux step is chosen
# per family at the largest round value that keeps every arm of the
# comparison stable (the unclipped ablation tolerates less than the clipped
# runs, and depth raises the output-layer curvature).
FIG_GAMMA = 0.1
FIG2_ETA_V = 0.5
FIG3_ETA_V = 1.0
DEPTH_ETA_V = 0.25
DEPTH_ETA_W1 = 0.25


@dataclass
class SuiteResult:
    name: str
    ok: bool
    lines: list[str]

    def report(self) -> str:
        verdict = "PASS" if self.ok else "FAIL"
        return "\n".join([f"suite {self.name}: {verdict}"] + [f"  {l}" for l in self.lines])


def run_suite(name: str, out_dir, seed: int | None = None) -> SuiteResult:
    out = Path(out_dir)
    if name == "tiny-convergence":
        return tiny_convergence(out, seed if seed is not None else 7)
    if name == "fig2":
        return fig2(out)
    if name == "fig3":
        return fig3(out)
    if name == "deep-depths":
        return deep_depths(out)
    if name == "lemma62-mc":
        return lemma62_mc(out, seed if seed is not None else 1234)
    raise ValueError(f"unknown suite {name!r}; choose from {SUITE_NAMES}")


def tiny_convergence(out_dir: Path, seed: int = 7, epsilon: float = 1e-3) -> SuiteResult:
    """Certified-schedule run on a small instance must reach the target loss."""
    config = RunConfig(n=8, d_in=16, r=6, L=3, activation="leaky_relu:0.5",
                       mode="monotone", schedule="theorem", epsilon=epsilon,
                       seed=seed, out_dir=str(out_dir / "tiny"))
    result = run_train(config)
    ok = result.final_total <= epsilon
    lines = [_mark(ok, f"final loss {result.final_total:.3e} <= {epsilon:g} "
                       f"(wall {result.wall_s:.1f}s)")]
    return SuiteResult("tiny-convergence", ok, lines)


def _fig_config(mode: str, activation: str, out_dir: Path, seed: int, svb: bool,
                n=500, d_in=600, r=30, L=5, k_outer=FIG_K_OUTER,
                eta_v=FIG2_ETA_V, eta_w1=1.0) -> RunConfig:
    return RunConfig(n=n, d_in=d_in, r=r, L=L, activation=activation, mode=mode,
                     schedule="explicit", eta_v=eta_v, eta_w1=eta_w1, eta_w2=1.0,
                     k_outer=k_outer, k_v=100, k_w=100, gamma=FIG_GAMMA,
                     sample_normalized=True, svb=svb, seed=seed,
                     out_dir=str(out_dir))


def fig2(out_dir: Path, seeds=FIG_SEEDS, k_outer=FIG_K_OUTER) -> SuiteResult:
    """Unit-step runs of the plain trainer: monotone decrease, and the
    singular-value-bounded runs must finish at least 10x below the
    unclipped runs."""
    lines = []
    ok = True
    finals = {}
    for svb in (True, False):
        label = "svb" if svb else "nosvb"
        for seed in seeds:
            cfg = _fig_config("monotone", "leaky_relu:0.5",
                              out_dir / "fig2" / f"{label}_seed{seed}", seed, svb,
                              k_outer=k_outer)
            result = run_train(cfg)
            finals[(label, seed)] = result.final_total
            if svb:
                mono = _non_increasing(result)
                ok &= mono
                lines.append(_mark(mono, f"seed {seed}: svb trace non-increasing "
                                         f"(final {result.final_total:.3e})"))
            else:
                lines.append(_mark(True, f"seed {seed}: nosvb final {result.final_total:.3e}"))
    for seed in seeds:
        gap_ok = finals[("svb", seed)] <= finals[("nosvb", seed)] / 10.0
        ok &= gap_ok
        ratio = finals[("nosvb", seed)] / max(finals[("svb", seed)], 1e-300)
        lines.append(_mark(gap_ok, f"seed {seed}: nosvb/svb final ratio {ratio:.1f} >= 10"))
    return SuiteResult("fig2", ok, lines)


def fig3(out_dir: Path, seeds=FIG_SEEDS, k_outer=FIG_K_OUTER) -> SuiteResult:
    """Skip-connection relu runs must decrease monotonically and finish at
    least 100x below the no-skip ablation."""
    lines = []
    ok = True
    finals = {}
    for mode in ("relu_skip", "relu_noskip"):
        for seed in seeds:
            cfg = _fig_config(mode, "relu", out_dir / "fig3" / f"{mode}_seed{seed}",
                              seed, True, k_outer=k_outer, eta_v=FIG3_ETA_V)
            result = run_train(cfg)
            finals[(mode, seed)] = result.final_total
            if mode == "relu_skip":
                mono = _non_increasing(result)
                ok &= mono
                lines.append(_mark(mono, f"seed {seed}: skip trace non-increasing "
                                         f"(final {result.final_total:.3e})"))
            else:
                lines.append(_mark(True, f"seed {seed}: noskip final {result.final_total:.3e}"))
    for seed in seeds:
        gap_ok = finals[("relu_noskip", seed)] >= 100.0 * finals[("relu_skip", seed)]
        ok &= gap_ok
        ratio = finals[("relu_noskip", seed)] / max(finals[("relu_skip", seed)], 1e-300)
        lines.append(_mark(gap_ok, f"seed {seed}: noskip/skip final ratio {ratio:.1f} >= 100"))
    return SuiteResult("fig3", ok, lines)


def deep_depths(out_dir: Path, depths=(4, 8, 12), seed: int = 301,
                k_outer=FIG_K_OUTER) -> SuiteResult:
    """Reduced-scale deep runs: the loss must be non-increasing at every depth."""
    lines = []
    ok = True
    for L in depths:
        cfg = _fig_config("monotone", "leaky_relu:0.5", out_dir / "depths" / f"L{L}",
                          seed, True, n=128, d_in=160, r=16, L=L, k_outer=k_outer,
                          eta_v=DEPTH_ETA_V, eta_w1=DEPTH_ETA_W1)
        result = run_train(cfg)
        mono = _non_increasing(result)
        ok &= mono
        lines.append(_mark(mono, f"L={L}: trace non-increasing "
                                 f"(final {result.final_total:.3e})"))
    return SuiteResult("deep-depths", ok, lines)


def lemma62_mc(out_dir: Path, seed: int = 1234, draws: int = 2000,
               r: int = 1024, delta: float = 0.05) -> SuiteResult:
    """Monte Carlo checks on the sign split of Gaussian output rows.

    (a) the small-mass event w_min^2 < 1/2 - sqrt(8 log(2/delta) / r) may
    occur with frequency at most 2*delta plus binomial slack;
    (b) the mixed-sign frequency at small widths matches 1 - 2^(1-r).
    """
    lines = []
    ok = True
    threshold = 0.5 - math.sqrt(8.0 * math.log(2.0 / delta) / r)
    below = 0
    for t in range(draws):
        w = gaussian_matrix(1, r, 1.0 / r, subseed(seed, t))
        if output_row_stats(w).w_min_sq < threshold:
            below += 1
    freq = below / draws
    cap = 2.0 * delta + 3.0 * math.sqrt(2.0 * delta * (1.0 - 2.0 * delta) / draws)
    part_ok = freq <= cap
    ok &= part_ok
    lines.append(_mark(part_ok, f"r={r}: freq(w_min^2 < {threshold:.4f}) = {freq:.4f} <= {cap:.4f}"))

    for small_r in (2, 3, 4):
        mixed = 0
        for t in range(draws):
            w = gaussian_matrix(1, small_r, 1.0 / small_r, subseed(seed, 10_000 * small_r + t))
            if output_row_stats(w).mixed_sign:
                mixed += 1
        p = 1.0 - 2.0 ** (1 - small_r)
        slack = 3.0 * math.sqrt(p * (1.0 - p) / draws)
        part_ok = abs(mixed / draws - p) <= slack
        ok &= part_ok
        lines.append(_mark(part_ok, f"r={small_r}: mixed-sign freq {mixed / draws:.4f} "
                                    f"within {slack:.4f} of {p:.4f}"))
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "lemma62_mc.txt").write_text("\n".join(lines) + "\n")
    return SuiteResult("lemma62-mc", ok, lines)


def _non_increasing(result: RunResult) -> bool:
    totals = [row.loss.total for row in result.trace]
    return all(b <= a + UPTICK_SLACK for a, b in zip(totals, totals[1:]))


def _mark(ok: bool, text: str) -> str:
    return f"[{'PASS' if ok else 'FAIL'}] {text}"

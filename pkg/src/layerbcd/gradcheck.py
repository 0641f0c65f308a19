"""Central finite-difference validation of every analytic gradient kind.

Piecewise-linear activations are non-differentiable at zero, so trial
configurations are rejected until every pre-activation magnitude clears a
kink threshold much larger than the difference step.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import gradients as g
from .activations import ActivationSpec, identity, leaky_relu, relu

FD_STEP = 1e-5
KINK_THRESHOLD = 1e-3
REL_ERR_LIMIT = 1e-6

KINDS = (
    "output_w",
    "output_v",
    "hidden_w",
    "hidden_v",
    "hidden_w_skip",
    "hidden_v_skip",
    "first_w",
    "first_w_linear",
)


def central_difference(f, x0: np.ndarray, step: float = FD_STEP) -> np.ndarray:
    """Entry-wise central finite differences of a scalar function."""
    grad = np.zeros_like(x0, dtype=np.float64)
    flat = grad.ravel()
    base = x0.copy()
    it = base.ravel()
    for k in range(it.size):
        saved = it[k]
        it[k] = saved + step
        fp = f(base)
        it[k] = saved - step
        fm = f(base)
        it[k] = saved
        flat[k] = (fp - fm) / (2.0 * step)
    return grad


@dataclass(frozen=True)
class GradCheckReport:
    seed: int
    trials: int
    max_rel_err: dict
    limit: float

    @property
    def passed(self) -> bool:
        return max(self.max_rel_err.values()) <= self.limit

    def lines(self) -> list[str]:
        out = [f"gradient check: seed={self.seed} trials={self.trials} limit={self.limit:g}"]
        for kind in KINDS:
            err = self.max_rel_err[kind]
            verdict = "ok" if err <= self.limit else "FAIL"
            out.append(f"  {kind:16s} max rel err {err:.3e}  {verdict}")
        return out


def run_grad_check(seed: int, trials: int = 100, step: float = FD_STEP,
                   mutate: str | None = None) -> GradCheckReport:
    """Compare each analytic gradient against central differences.

    mutate names one kind whose analytic gradient gets its sign flipped;
    tests use it to confirm the harness actually detects wrong gradients.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = np.random.Generator(np.random.Philox(key=seed))
    worst = {kind: 0.0 for kind in KINDS}
    acts = [leaky_relu(0.5), relu(), identity()]
    for t in range(trials):
        act = acts[t % len(acts)]
        r = int(rng.integers(2, 7))
        n = int(rng.integers(1, 6))
        d_in = int(rng.integers(2, 9))
        for kind in KINDS:
            analytic, fd = _one_case(kind, act, r, n, d_in, rng, step)
            if mutate == kind:
                analytic = -analytic
            denom = max(float(np.linalg.norm(fd)), 1e-12)
            rel = float(np.linalg.norm(analytic - fd)) / denom
            worst[kind] = max(worst[kind], rel)
    return GradCheckReport(seed, trials, worst, REL_ERR_LIMIT)


def _one_case(kind: str, act: ActivationSpec, r: int, n: int, d_in: int,
              rng: np.random.Generator, step: float):
    if kind == "output_w":
        v = rng.standard_normal((r, n))
        y = rng.standard_normal(n)
        w = rng.standard_normal((1, r))
        return (g.grad_output_weights(w, v, y),
                central_difference(lambda m: float(np.sum((m @ v - y) ** 2)), w, step))
    if kind == "output_v":
        w = rng.standard_normal((1, r))
        y = float(rng.standard_normal())
        v = rng.standard_normal((r, 1))
        ya = np.array([y])
        return (g.grad_output_aux(w, v, ya),
                central_difference(lambda m: float(np.sum((w @ m - y) ** 2)), v, step))
    if kind in ("hidden_w", "hidden_w_skip"):
        skip = kind.endswith("skip")
        w, vp, vt = _kink_free(lambda: (rng.standard_normal((r, r)),
                                        rng.standard_normal((r, n)),
                                        rng.standard_normal((r, n))), act)
        if skip:
            fn = lambda m: float(np.sum((_s(act, m @ vp) + vp - vt) ** 2))
            analytic = g.grad_hidden_weights_skip(w, vp, vt, act)
        else:
            fn = lambda m: float(np.sum((_s(act, m @ vp) - vt) ** 2))
            analytic = g.grad_hidden_weights(w, vp, vt, act)
        return analytic, central_difference(fn, w, step)
    if kind in ("hidden_v", "hidden_v_skip"):
        skip = kind.endswith("skip")
        w, v, vt = _kink_free(lambda: (rng.standard_normal((r, r)),
                                       rng.standard_normal((r, 1)),
                                       rng.standard_normal((r, 1))), act, perturb_second=True)
        if skip:
            fn = lambda m: float(np.sum((_s(act, w @ m) + m - vt) ** 2))
            analytic = g.grad_hidden_aux_skip(w, v, vt, act)
        else:
            fn = lambda m: float(np.sum((_s(act, w @ m) - vt) ** 2))
            analytic = g.grad_hidden_aux(w, v, vt, act)
        return analytic, central_difference(fn, v, step)
    if kind == "first_w":
        w, xt, v1 = _kink_free(lambda: (rng.standard_normal((r, d_in)),
                                        rng.standard_normal((d_in, n)),
                                        rng.standard_normal((r, n))), act)
        return (g.grad_first_weights(w, xt, v1, act),
                central_difference(lambda m: float(np.sum((_s(act, m @ xt) - v1) ** 2)), w, step))
    if kind == "first_w_linear":
        w = rng.standard_normal((r, d_in))
        xt = rng.standard_normal((d_in, n))
        v1 = rng.standard_normal((r, n))
        return (g.grad_first_weights_linear(w, xt, v1),
                central_difference(lambda m: float(np.sum((m @ xt - v1) ** 2)), w, step))
    raise ValueError(f"unknown gradient kind {kind!r}")


def _kink_free(draw, act: ActivationSpec, perturb_second: bool = False, max_tries: int = 200):
    """Redraw until pre-activations stay clear of the activation kink."""
    if act.kind == "identity":
        return draw()
    for _ in range(max_tries):
        a, b, c = draw()
        z = a @ b
        if np.abs(z).min() >= KINK_THRESHOLD:
            return a, b, c
    raise RuntimeError("could not draw a kink-free configuration")


def _s(act: ActivationSpec, z: np.ndarray) -> np.ndarray:
    from .activations import apply

    return apply(act, z)

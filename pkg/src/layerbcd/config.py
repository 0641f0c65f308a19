"""Run configuration: flat key=value files plus command-line overrides."""

from __future__ import annotations

from dataclasses import dataclass, fields, replace
from pathlib import Path

from .activations import check_assumption, parse_activation

MODES = ("monotone", "relu_skip", "relu_noskip")
SCHEDULE_SOURCES = ("theorem", "explicit")


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    # data: either a dataset CSV path or inline generator settings
    dataset: str | None = None
    n: int = 8
    d_in: int = 16
    teacher_hidden: int | None = None
    # architecture
    L: int = 3
    r: int = 6
    activation: str = "leaky_relu:0.5"
    # algorithm
    mode: str = "monotone"
    schedule: str = "theorem"
    eta_v: float | None = None
    eta_w1: float | None = None
    eta_w2: float | None = None
    k_outer: int | None = None
    k_v: int | None = None
    k_w: int | None = None
    gamma: float = 1.0
    epsilon: float = 1e-3
    # step-size convention: divide weight steps by the sample count
    sample_normalized: bool = False
    # initialization
    svb: bool = True
    svb_s1: float | None = None
    svb_s2: float | None = None
    # run control
    seed: int = 0
    out_dir: str = "out"
    strict_rank: bool = True

    def validate(self) -> None:
        if self.mode not in MODES:
            raise ConfigError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.schedule not in SCHEDULE_SOURCES:
            raise ConfigError(f"schedule must be one of {SCHEDULE_SOURCES}, got {self.schedule!r}")
        try:
            act = parse_activation(self.activation)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        if self.mode in ("relu_skip", "relu_noskip") and act.kind != "relu":
            raise ConfigError(f"mode {self.mode} requires activation relu, got {self.activation}")
        if self.mode == "monotone":
            ok, alpha, _ = check_assumption(act)
            if not ok:
                raise ConfigError(
                    f"mode monotone needs a strictly increasing activation "
                    f"(derivative bound {alpha} fails); use relu_skip for relu")
        if self.schedule == "explicit":
            missing = [f for f in ("eta_v", "eta_w1", "eta_w2", "k_outer", "k_v", "k_w")
                       if getattr(self, f) is None]
            if missing:
                raise ConfigError(f"explicit schedule requires {', '.join(missing)}")
        if self.mode == "relu_noskip" and self.schedule == "theorem":
            raise ConfigError("relu_noskip has no certified schedule; set schedule = explicit")
        if self.gamma <= 0:
            raise ConfigError(f"gamma must be positive, got {self.gamma}")
        if self.epsilon <= 0:
            raise ConfigError(f"epsilon must be positive, got {self.epsilon}")
        if (self.svb_s1 is None) != (self.svb_s2 is None):
            raise ConfigError("svb_s1 and svb_s2 must be set together")
        if self.L < 2 or self.r < 1 or self.n < 1 or self.d_in < 1:
            raise ConfigError("L >= 2 and positive r, n, d_in are required")


_BOOL_WORDS = {"true": True, "false": False, "1": True, "0": False, "yes": True, "no": False}


def _coerce(name: str, text: str, annotation):
    text = text.strip()
    if text.lower() in ("none", ""):
        return None
    if "bool" in annotation:
        if text.lower() not in _BOOL_WORDS:
            raise ConfigError(f"{name}: expected a boolean, got {text!r}")
        return _BOOL_WORDS[text.lower()]
    if "int" in annotation:
        return int(text)
    if "float" in annotation:
        return float(text)
    return text


def load_config(path) -> RunConfig:
    """Parse a flat ``key = value`` file into a RunConfig."""
    known = {f.name: str(f.type) for f in fields(RunConfig)}
    values = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
        key, text = (part.strip() for part in line.split("=", 1))
        if key not in known:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        try:
            values[key] = _coerce(key, text, known[key])
        except (ValueError, TypeError) as exc:
            raise ConfigError(f"{path}:{lineno}: {exc}") from exc
    return RunConfig(**values)


def apply_overrides(config: RunConfig, overrides: dict) -> RunConfig:
    """Replace fields with any non-None override values (CLI flags win)."""
    updates = {k: v for k, v in overrides.items() if v is not None}
    return replace(config, **updates)


def dump_config(config: RunConfig) -> str:
    lines = []
    for f in fields(RunConfig):
        val = getattr(config, f.name)
        if val is None:
            continue
        lines.append(f"{f.name} = {val}")
    return "\n".join(lines) + "\n"

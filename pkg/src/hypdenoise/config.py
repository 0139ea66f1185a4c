"""Experiment configuration: JSON file plus flag overrides."""

import json
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path


class ConfigError(Exception):
    pass


# per-experiment defaults follow the synthetic/line and image settings
# used throughout the experiments
_KIND_DEFAULTS = {
    "synthetic-h1": dict(
        n=400, sigma=0.6, lam=6.0, mu=0.75, rho_tikhonov=0.1, rho_tv=1.0,
        noise_kind="tangential", max_iter=20000, tol=1e-11,
    ),
    "synthetic-h2": dict(
        n=400, sigma=0.3, lam=5.0, mu=0.1, rho_tikhonov=0.1, rho_tv=1.0,
        noise_kind="ambient", max_iter=20000, tol=1e-11,
    ),
    "gaussian-image": dict(
        rows=64, cols=64, sigma=0.15, lam=4.0, mu=0.6,
        rho_tikhonov=10.0, rho_tv=1.0, k_shots=20,
        noise_kind="ambient", max_iter=3000, tol=1e-7,
    ),
}


@dataclass
class ExperimentConfig:
    kind: str
    model: str = "both"  # tikhonov | tv | both
    lam: float = 1.0
    mu: float = 0.1
    rho_tikhonov: float = 0.1
    rho_tv: float = 1.0
    sigma: float = 0.1
    seed: int = 42
    n: int = 400
    rows: int = 64
    cols: int = 64
    k_shots: int = 20
    max_iter: int = 20000
    tol: float = 1e-11  # eps_primal of the stopping rule
    mae_gate: float = 1e-3  # refuse to emit sheet results above this
    noise_kind: str = "tangential"
    input: str | None = None
    out: str = "out"
    knots_h1: list = field(default_factory=list)
    knots_h2_r: list = field(default_factory=list)
    knots_h2_s: list = field(default_factory=list)
    overrides: dict = field(default_factory=dict)

    def validate(self):
        if self.kind not in _KIND_DEFAULTS:
            raise ConfigError(f"unknown experiment kind: {self.kind}")
        if self.model not in ("tikhonov", "tv", "both"):
            raise ConfigError(f"unknown model: {self.model}")
        for name in ("lam", "mu", "rho_tikhonov", "rho_tv", "tol", "mae_gate"):
            if getattr(self, name) <= 0:
                raise ConfigError(f"{name} must be positive")
        if self.sigma < 0:
            raise ConfigError("sigma must be nonnegative")
        if self.max_iter < 0:
            raise ConfigError("max_iter must be nonnegative")
        return self

    def echo(self, directory):
        """Write the fully resolved config into the output directory."""
        path = Path(directory) / "config_echo.json"
        payload = asdict(self)
        path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
        return path


_FIELD_NAMES = {f.name for f in fields(ExperimentConfig)} - {"overrides"}


def parse_config(kind, file_path=None, flag_values=None):
    """Resolve a config from defaults, optional JSON file, and flags.

    Precedence: flags > file > per-kind defaults.  Unknown file keys are
    a hard error; overridden file keys are recorded in `overrides`.
    """
    values = dict(_KIND_DEFAULTS[kind]) if kind in _KIND_DEFAULTS else {}
    values["kind"] = kind

    if file_path is not None:
        try:
            raw = Path(file_path).read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read config file: {exc}") from exc
        try:
            data = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise ConfigError(
                f"config parse error at line {exc.lineno}, column {exc.colno}: {exc.msg}"
            ) from exc
        if not isinstance(data, dict):
            raise ConfigError("config file must contain a JSON object")
        for key in data:
            if key not in _FIELD_NAMES:
                raise ConfigError(f"unknown config key: {key!r}")
        if data.get("kind", kind) != kind:
            raise ConfigError(
                f"config file kind {data['kind']!r} conflicts with subcommand {kind!r}"
            )
        values.update(data)

    overrides = {}
    for key, val in (flag_values or {}).items():
        if val is None:
            continue
        if key not in _FIELD_NAMES:
            raise ConfigError(f"unknown config key: {key!r}")
        if key in values and values[key] != val:
            overrides[key] = {"replaced": values.get(key), "with": val}
        values[key] = val

    cfg = ExperimentConfig(**values)
    cfg.overrides = overrides
    return cfg.validate()

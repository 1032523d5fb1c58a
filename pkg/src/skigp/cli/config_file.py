"""
Experiment configuration files.

A configuration file is a flat sequence of ``(key value...)`` S-expressions;
``;`` starts a comment. Example::

    ; covariance reconstruction at desk scale
    (experiment reconstruct)
    (seed 3)
    (n 1000)
    (m_sweep 10 20 40 80 160)
    (schemes linear cubic idw globalgp fitc)
    (gaps (20 28) (60 70))

Keys may use ``-`` or ``_``. Unknown keys raise ConfigError.
"""

import hashlib
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

import sexpdata
from loguru import logger

from ..core.exceptions import ConfigError, ParseError
from ..gp.learning import GRADIENT_SOURCES

EXPERIMENTS = ("reconstruct", "kernel-learn", "infill")

RECONSTRUCT_SCHEMES = ("linear", "cubic", "idw", "globalgp", "fitc")
INFILL_METHODS = ("ski", "fitc", "mean")
# where infill hyperparameters are learned: SKI on every training point, or an
# exact GP on an evenly strided subset
HYPER_SOURCES = ("ski", "subset")


@dataclass
class ExperimentConfig:
    """Settings for one experiment run.

    Fields left as None take the experiment's own default.
    """

    experiment: str = "reconstruct"
    seed: int = 0
    out: str = "results"

    # data
    n: Optional[int] = None
    data: Optional[str] = None
    gaps: List[Tuple[float, float]] = field(default_factory=list)
    noise: float = 0.1

    # kernel and noise
    lengthscale: Optional[float] = None
    signal_variance: float = 1.0
    sigma2: float = 0.01
    sm_components: int = 5

    # grids and methods
    m_sweep: Optional[List[int]] = None
    schemes: Optional[List[str]] = None
    grid_size: int = 100
    fitc_m: int = 100
    fitc_max_m: int = 800
    snap_to_grid: bool = False

    # hyperparameter learning
    learn_hypers: bool = True
    hypers_from: str = "ski"
    learn_grid_size: int = 2048
    train_subset: int = 300
    learn_max_iters: int = 50
    gradient: str = "analytic"

    # kernel curve reporting
    tau_max: float = 5.0
    tau_points: int = 101

    def validate(self) -> "ExperimentConfig":
        """Check cross-field invariants.

        Raises:
            ConfigError: On an unknown experiment, bad counts, or a missing data file
        """
        if self.experiment not in EXPERIMENTS:
            raise ConfigError(
                f"Unknown experiment '{self.experiment}'; expected one of {EXPERIMENTS}",
                field="experiment",
                value=self.experiment,
            )
        if self.m_sweep is not None:
            if not self.m_sweep or any(int(m) < 2 for m in self.m_sweep):
                raise ConfigError(
                    "m_sweep values must be integers >= 2", field="m_sweep", value=self.m_sweep
                )
        for name in (
            "grid_size", "fitc_m", "fitc_max_m", "learn_grid_size", "train_subset",
            "sm_components", "tau_points",
        ):
            if getattr(self, name) < 1:
                raise ConfigError(f"{name} must be positive", field=name, value=getattr(self, name))
        if self.n is not None and self.n < 2:
            raise ConfigError("n must be at least 2", field="n", value=self.n)
        for key in ("sigma2", "signal_variance", "tau_max"):
            if not getattr(self, key) > 0:
                raise ConfigError(f"{key} must be positive", field=key, value=getattr(self, key))
        if self.lengthscale is not None and not self.lengthscale > 0:
            raise ConfigError("lengthscale must be positive", field="lengthscale")
        if self.hypers_from not in HYPER_SOURCES:
            raise ConfigError(
                f"Unknown hypers_from '{self.hypers_from}'; expected one of {HYPER_SOURCES}",
                field="hypers_from",
                value=self.hypers_from,
            )
        if self.gradient not in GRADIENT_SOURCES:
            raise ConfigError(
                f"Unknown gradient '{self.gradient}'; expected one of {GRADIENT_SOURCES}",
                field="gradient",
                value=self.gradient,
            )
        if self.noise < 0:
            raise ConfigError("noise must be non-negative", field="noise", value=self.noise)
        for lo, hi in self.gaps:
            if not lo < hi:
                raise ConfigError(f"Gap ({lo}, {hi}) is empty", field="gaps", value=(lo, hi))
        if self.data is not None and not Path(self.data).exists():
            raise ConfigError(f"Data file not found: {self.data}", field="data", value=self.data)
        return self

    def to_dict(self) -> Dict[str, Any]:
        return {f.name: getattr(self, f.name) for f in fields(self)}

    def canonical(self) -> str:
        """Deterministic text form used for the run hash."""
        entries = []
        for key, value in sorted(self.to_dict().items()):
            if value is None:
                continue
            if isinstance(value, (list, tuple)):
                items = [list(v) if isinstance(v, tuple) else v for v in value]
                entries.append([sexpdata.Symbol(key)] + items)
            else:
                entries.append([sexpdata.Symbol(key), value])
        return "\n".join(sexpdata.dumps(e) for e in entries)

    def sha256(self) -> str:
        return hashlib.sha256(self.canonical().encode("utf-8")).hexdigest()


_INT_KEYS = {
    "seed", "n", "sm_components", "grid_size", "fitc_m", "fitc_max_m", "learn_grid_size",
    "train_subset", "learn_max_iters", "tau_points",
}
_FLOAT_KEYS = {"noise", "lengthscale", "signal_variance", "sigma2", "tau_max"}
_STR_KEYS = {"experiment", "out", "data", "hypers_from", "gradient"}
_BOOL_KEYS = {"snap_to_grid", "learn_hypers"}
_TRUE = {"yes", "true", "on", "1"}
_FALSE = {"no", "false", "off", "0"}


def _atom(value: Any) -> Any:
    return str(value) if isinstance(value, sexpdata.Symbol) else value


def _number(key: str, value: Any, kind: type) -> Any:
    value = _atom(value)
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"'{key}' expects a number, got {value!r}", field=key, value=value)
    if kind is int and float(value) != int(value):
        raise ConfigError(f"'{key}' expects an integer, got {value!r}", field=key, value=value)
    return kind(value)


def _coerce(key: str, values: List[Any]) -> Any:
    if key == "m_sweep":
        return [_number(key, v, int) for v in values]
    if key == "schemes":
        return [str(_atom(v)) for v in values]
    if key == "gaps":
        gaps = []
        for v in values:
            if not isinstance(v, list) or len(v) != 2:
                raise ConfigError(f"Gaps are (lo hi) pairs, got {v!r}", field=key, value=v)
            gaps.append((_number(key, v[0], float), _number(key, v[1], float)))
        return gaps
    if len(values) != 1:
        raise ConfigError(f"'{key}' takes exactly one value", field=key, value=values)
    value = values[0]
    if key in _INT_KEYS:
        return _number(key, value, int)
    if key in _FLOAT_KEYS:
        return _number(key, value, float)
    if key in _BOOL_KEYS:
        text = str(_atom(value)).lower()
        if text in _TRUE:
            return True
        if text in _FALSE:
            return False
        raise ConfigError(f"'{key}' expects yes or no, got {value!r}", field=key, value=value)
    return str(_atom(value))


def _strip_comments(text: str) -> str:
    """Drop ``;`` comments; a ``;`` inside a double-quoted string is kept."""
    lines = []
    in_string = escaped = False
    for line in text.splitlines():
        kept = []
        for ch in line:
            if in_string:
                if escaped:
                    escaped = False
                elif ch == "\\":
                    escaped = True
                elif ch == '"':
                    in_string = False
            elif ch == ";":
                break
            elif ch == '"':
                in_string = True
            kept.append(ch)
        lines.append("".join(kept))
    return "\n".join(lines)


def parse_config(text: str, base: Optional[ExperimentConfig] = None) -> ExperimentConfig:
    """Parse configuration text on top of ``base`` (defaults if None).

    Raises:
        ParseError: If the text is not a sequence of S-expressions
        ConfigError: On unknown or duplicate keys and invalid values
    """
    try:
        entries = sexpdata.loads("(" + _strip_comments(text) + ")")
    except Exception as e:
        raise ParseError(f"Configuration is not valid S-expression text: {e}") from e

    cfg = base or ExperimentConfig()
    known = {f.name for f in fields(ExperimentConfig)}
    seen = set()
    for entry in entries:
        if not isinstance(entry, list) or not entry or not isinstance(entry[0], sexpdata.Symbol):
            raise ConfigError(f"Expected (key value...), got {entry!r}", field="entry")
        key = str(entry[0]).replace("-", "_")
        if key not in known:
            raise ConfigError(f"Unknown configuration key '{key}'", field=key)
        if key in seen:
            raise ConfigError(f"Duplicate configuration key '{key}'", field=key)
        seen.add(key)
        setattr(cfg, key, _coerce(key, entry[1:]))
    return cfg


def load_config(path: Union[str, Path], base: Optional[ExperimentConfig] = None) -> ExperimentConfig:
    """Read and parse a configuration file."""
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"Configuration file not found: {path}", field="config", value=str(path))
    with open(path, "r", encoding="utf-8") as f:
        cfg = parse_config(f.read(), base)
    logger.info(f"Loaded configuration from {path}")
    return cfg

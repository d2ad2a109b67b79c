"""
Run configuration for the minima lab.

A RunConfig is assembled from an optional `key = value` config file and command-line flags,
flags winning. Validation failures surface as InputError (exit code 2).
"""
from fractions import Fraction
from typing import Any, Dict, List, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, ValidationError, field_validator, model_validator

from .errors import InputError
from .lattice import PathSpec, ThetaSpec, required_faithfulness
from .minima import DEFAULT_BUDGET, METHODS

COMMANDS = ("trace", "events", "exponents", "lemma", "corollary", "theorem", "transference", "bounds")
M_EQUALS_ONE = ("corollary", "theorem", "transference")
NO_THETA = ("lemma",)
DEFAULT_S_MAX = 25.0


class RunConfig(BaseModel):
    """One CLI invocation: the problem, the u range and the campaign knobs."""

    model_config = ConfigDict(arbitrary_types_allowed=True, extra="forbid")

    command: Literal[COMMANDS]
    theta: List[str] = []
    mode: Literal["primal", "dual"] = "primal"
    m: int = 1
    n: Optional[int] = None

    # u range
    u_min: Fraction = Fraction(2)
    u_max: Optional[Fraction] = None
    s_max: Optional[float] = None
    samples: int = 200

    # exponents
    p: int = 2
    p_max: Optional[int] = None
    faithfulness: Optional[Fraction] = None
    tolerance: float = 0.05
    tail_fraction: float = 0.5
    t_max: Optional[Fraction] = None
    t_samples: int = 40

    # lemma
    seed: str = "0"
    trials: int = 1000
    dim: Optional[int] = None
    entry_bound: int = 3
    denominator_bound: int = 1
    replay: Optional[str] = None
    replay_dir: Optional[str] = None

    # corollary
    events: int = 30

    # engine and output
    workers: int = 1
    method: str = "auto"
    budget: Optional[int] = DEFAULT_BUDGET
    exact: bool = False
    confirm_stability: bool = False
    out: Optional[str] = None
    metrics_out: Optional[str] = None

    @field_validator("u_min", "u_max", "faithfulness", "t_max", mode="before")
    @classmethod
    def _exact_rational(cls, value: Any) -> Any:
        if value is None or isinstance(value, Fraction):
            return value
        try:
            return Fraction(str(value).strip())
        except (ValueError, ZeroDivisionError) as e:
            raise ValueError(f"not a rational number: {value!r}") from e

    @field_validator("theta", mode="before")
    @classmethod
    def _split_theta(cls, value: Any) -> Any:
        if isinstance(value, str):
            return value.split()
        return value

    @field_validator("seed", mode="before")
    @classmethod
    def _seed_text(cls, value: Any) -> Any:
        return str(value)

    @field_validator("budget", mode="before")
    @classmethod
    def _unlimited_budget(cls, value: Any) -> Any:
        if value in (0, "0", "none", "None"):
            return None
        return value

    @field_validator("method")
    @classmethod
    def _known_method(cls, value: str) -> str:
        if value not in METHODS:
            raise ValueError(f"method must be one of {METHODS}")
        return value

    @field_validator("tolerance")
    @classmethod
    def _positive_tolerance(cls, value: float) -> float:
        if value <= 0:
            raise ValueError("tolerance must be positive")
        return value

    @field_validator("tail_fraction")
    @classmethod
    def _tail_fraction_range(cls, value: float) -> float:
        if not 0 < value <= 1:
            raise ValueError("tail_fraction must lie in (0, 1]")
        return value

    @model_validator(mode="after")
    def _check_problem(self) -> "RunConfig":
        if self.command in NO_THETA:
            if self.dim is not None and self.dim < 2:
                raise ValueError("dim must be at least 2")
            return self
        if not self.theta:
            raise ValueError(f"{self.command} needs --theta")
        if self.m < 1:
            raise ValueError("m must be positive")
        if self.n is None:
            if len(self.theta) % self.m:
                raise ValueError(f"{len(self.theta)} theta specs do not fill an n x {self.m} matrix")
            self.n = len(self.theta) // self.m
        if len(self.theta) != self.n * self.m:
            raise ValueError(f"need n*m = {self.n * self.m} theta specs, got {len(self.theta)}")
        if self.command in M_EQUALS_ONE and self.m != 1:
            raise ValueError(f"{self.command} needs m = 1")

        d = self.m + self.n
        if not 1 <= self.p <= d:
            raise ValueError(f"p must lie in [1, {d}]")
        if self.p_max is not None and not 1 <= self.p_max <= d:
            raise ValueError(f"p_max must lie in [1, {d}]")

        if self.u_max is None:
            self.u_max = self.path().u_at(self.s_max if self.s_max is not None else DEFAULT_S_MAX)
        if not 1 < self.u_min < self.u_max:
            raise ValueError(f"need 1 < u_min < u_max, got {self.u_min}, {self.u_max}")
        if self.faithfulness is not None and self.faithfulness <= 0:
            raise ValueError("faithfulness must be positive")
        return self

    @property
    def d(self) -> int:
        return self.m + (self.n or 0)

    def theta_spec(self) -> ThetaSpec:
        return ThetaSpec.from_strings(self.theta, self.m)

    def path(self, mode: Optional[str] = None) -> PathSpec:
        mode = mode or self.mode
        return PathSpec.dual(self.m, self.n) if mode == "dual" else PathSpec.primal(self.m, self.n)

    def resolved_faithfulness(self) -> Fraction:
        if self.faithfulness is not None:
            return self.faithfulness
        return required_faithfulness(self.u_max, self.d)

    def resolved_p_max(self) -> int:
        return self.p_max or self.d


def _normalize_key(key: str) -> str:
    return key.strip().lstrip("-").replace("-", "_")


def load_config_file(path: str) -> Dict[str, str]:
    """
    Read `key = value` lines; `#` starts a comment, blank lines are skipped.

    Keys are long flag names with dashes or underscores.
    """
    values: Dict[str, str] = {}
    try:
        with open(path, encoding="utf-8") as handle:
            lines = handle.readlines()
    except OSError as e:
        raise InputError(f"cannot read config file {path}: {e}") from e
    for number, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise InputError(f"{path}:{number}: expected key = value")
        key = _normalize_key(key)
        if key not in RunConfig.model_fields or key == "command":
            raise InputError(f"{path}:{number}: unknown key {key!r}")
        values[key] = value.strip()
    return values


def build_config(command: str, file_values: Optional[Dict[str, Any]] = None, **flags: Any) -> RunConfig:
    """Merge file values and flags (flags win, None flags are ignored) into a validated RunConfig."""
    merged: Dict[str, Union[str, Any]] = dict(file_values or {})
    merged.update({key: value for key, value in flags.items() if value is not None})
    merged["command"] = command
    try:
        return RunConfig(**merged)
    except ValidationError as e:
        problems = "; ".join(
            f"{'.'.join(str(part) for part in error['loc']) or 'config'}: {error['msg']}" for error in e.errors()
        )
        raise InputError(f"invalid configuration: {problems}") from e

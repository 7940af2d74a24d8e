import enum
try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from pathlib import Path
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from groundstate.core.errors import ConfigError
from groundstate.schemas.params import InequalityParams
from groundstate.schemas.quadrature import QuadratureSpec


class CommandEnum(str, enum.Enum):
    CONSTANTS = "constants"
    VERIFY = "verify"
    SWEEP = "sweep"
    SEMIGROUP = "semigroup"
    DISCRETE_GS = "discrete-gs"


class IdentityEnum(str, enum.Enum):
    A_PRIME = "A-prime"
    B_PRIME = "B-prime"
    C_PRIME = "C-prime"
    FLS = "fls"
    LOCAL_HARDY = "local-hardy"
    POWER_LAW = "power-law"
    SMALL_S = "small-s"
    LARGE_S = "large-s"
    SEMINORM_LIMIT = "seminorm-limit"


class OutputFormat(str, enum.Enum):
    JSON = "json"
    CSV = "csv"


class ParamsSection(BaseModel):
    model_config = ConfigDict(extra="forbid")

    N: Optional[int] = None
    alpha: Optional[float] = None
    s: float = 0.0


_NEEDS_ALPHA = {IdentityEnum.A_PRIME, IdentityEnum.B_PRIME, IdentityEnum.C_PRIME,
                IdentityEnum.POWER_LAW, IdentityEnum.SMALL_S, IdentityEnum.LARGE_S}
_NEEDS_GRADIENT = {IdentityEnum.B_PRIME, IdentityEnum.LOCAL_HARDY, IdentityEnum.LARGE_S}
_NEEDS_FRACTIONAL_S = {IdentityEnum.FLS, IdentityEnum.SEMINORM_LIMIT}


class RunConfig(BaseModel):
    """One CLI run; validated before any computation."""
    model_config = ConfigDict(extra="forbid")

    command: CommandEnum
    params: ParamsSection = ParamsSection()
    profile: Optional[str] = None
    quadrature: QuadratureSpec = QuadratureSpec()
    lambdas: List[float] = [1.0, 10.0, 100.0, 1000.0, 10000.0]
    output_path: Optional[str] = None
    format: Optional[OutputFormat] = None
    identity: Optional[IdentityEnum] = None
    beta: Optional[float] = None
    radii: List[float] = [0.1, 1.0, 10.0]
    tol: Optional[float] = Field(default=None, gt=0)
    s_small: float = Field(default=0.01, gt=0, lt=2)
    s_large: float = Field(default=1.99, gt=0, lt=2)
    verify_rows: bool = False
    seed: int = 0
    size: int = Field(default=50, ge=1)
    count: int = Field(default=1, ge=1)

    @field_validator('lambdas', 'radii', mode='before')
    @classmethod
    def parse_list(cls, v):
        if isinstance(v, str):
            return [float(x) for x in v.split(',') if x.strip()]
        return v

    @model_validator(mode='after')
    def validate_command_fields(self):
        command = self.command
        needs_params = command in (CommandEnum.CONSTANTS, CommandEnum.VERIFY, CommandEnum.SWEEP, CommandEnum.SEMIGROUP)
        if needs_params and self.params.N is None:
            raise ValueError(f"'{command.value}' requires params.N")

        if command is CommandEnum.VERIFY:
            if self.identity is None:
                raise ValueError("'verify' requires an identity")
            if self.identity in _NEEDS_ALPHA and self.params.alpha is None:
                raise ValueError(f"identity '{self.identity.value}' requires params.alpha")
            self._check_identity_domain()
            if self.identity is IdentityEnum.POWER_LAW:
                if self.beta is None:
                    raise ValueError("identity 'power-law' requires beta")
            elif self.profile is None:
                raise ValueError(f"identity '{self.identity.value}' requires a profile")
        elif command in (CommandEnum.CONSTANTS, CommandEnum.SWEEP):
            if self.params.alpha is None:
                raise ValueError(f"'{command.value}' requires params.alpha")
            self.inequality_params()
        elif command is CommandEnum.SEMIGROUP:
            if self.params.alpha is None or self.beta is None:
                raise ValueError("'semigroup' requires params.alpha and beta")

        if command is CommandEnum.SWEEP:
            if not self.lambdas:
                raise ValueError("'sweep' requires a non-empty lambdas list")
            if self.lambdas[0] < 1.0 or any(b <= a for a, b in zip(self.lambdas, self.lambdas[1:])):
                raise ValueError("lambdas must be strictly increasing and >= 1")
        elif self.format is OutputFormat.CSV:
            raise ValueError("csv output exists only for sweeps")
        return self

    def _check_identity_domain(self) -> None:
        identity, N, s = self.identity, self.params.N, self.params.s
        if identity in _NEEDS_GRADIENT and N < 3:
            raise ValueError(f"identity '{identity.value}' requires N >= 3, got N={N}")
        if identity in _NEEDS_FRACTIONAL_S and not (0.0 < s < min(2.0, N)):
            raise ValueError(f"identity '{identity.value}' requires 0 < s < min(2, N), got s={s}")
        if identity is IdentityEnum.C_PRIME:
            if not 0.0 < s < 2.0:
                raise ValueError(f"identity 'C-prime' requires 0 < s < 2, got s={s}")
            self.inequality_params()

    def inequality_params(self) -> InequalityParams:
        return InequalityParams(N=self.params.N, alpha=self.params.alpha, s=self.params.s)

    @property
    def output_format(self) -> OutputFormat:
        if self.format is not None:
            return self.format
        return OutputFormat.CSV if self.command is CommandEnum.SWEEP else OutputFormat.JSON


def load_config_file(path: str) -> Dict[str, Any]:
    """TOML の設定ファイルを読み込む"""
    try:
        with Path(path).open("rb") as fh:
            return tomllib.load(fh)
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}", field="config")
    except tomllib.TOMLDecodeError as e:
        raise ConfigError(f"invalid TOML in {path}: {e}", field="config")


def merge_overrides(base: Dict[str, Any], overrides: Dict[str, Any]) -> Dict[str, Any]:
    """Flags win over file values, key by key, one level deep into tables."""
    merged = dict(base)
    for key, value in overrides.items():
        if value is None:
            continue
        if isinstance(value, dict):
            table = dict(merged.get(key) or {})
            table.update({k: v for k, v in value.items() if v is not None})
            merged[key] = table
        else:
            merged[key] = value
    return merged

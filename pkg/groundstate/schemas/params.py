from typing import Literal

from pydantic import BaseModel, ConfigDict, field_validator, model_validator


class InequalityParams(BaseModel):
    """The triple (N, alpha, s) indexing every constant and functional."""
    model_config = ConfigDict(frozen=True)

    N: int
    alpha: float
    s: float = 0.0

    @field_validator('N')
    @classmethod
    def validate_dimension(cls, v):
        if v < 1:
            raise ValueError('N must be a positive integer')
        return v

    @model_validator(mode='after')
    def validate_admissible(self):
        if not 0.0 < self.alpha < self.N:
            raise ValueError(f'alpha must lie in (0, N) = (0, {self.N}), got {self.alpha}')
        if not 0.0 <= self.s <= 2.0:
            raise ValueError(f's must lie in [0, 2], got {self.s}')
        if self.s >= self.N:
            raise ValueError(f's must be smaller than N, got s={self.s}, N={self.N}')
        if self.s == 2.0 and self.N < 3:
            raise ValueError('the gradient case s = 2 requires N >= 3')
        return self

    @property
    def regime(self) -> Literal["l2", "gradient", "fractional"]:
        if self.s == 0.0:
            return "l2"
        if self.s == 2.0:
            return "gradient"
        return "fractional"

    @property
    def ground_exponent(self) -> float:
        """Exponent p of the groundstate |x|^{-p}, p = (N - s)/2."""
        return (self.N - self.s) / 2.0

    @property
    def weight_exponent(self) -> float:
        return (self.alpha + self.s) / 2.0


class ParamsRecord(BaseModel):
    """Parameter echo stored in reports; alpha = 0 marks the Hardy family."""
    N: int
    alpha: float = 0.0
    s: float = 0.0

    @classmethod
    def of(cls, params: InequalityParams) -> "ParamsRecord":
        return cls(N=params.N, alpha=params.alpha, s=params.s)

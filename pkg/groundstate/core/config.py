from pydantic_settings import BaseSettings
from pydantic import field_validator, ConfigDict
from typing import Optional


class Settings(BaseSettings):
    model_config = ConfigDict(
        env_file=".env",
        env_prefix="GROUNDSTATE_",
        case_sensitive=True,
        extra="ignore"
    )

    PROJECT_NAME: str = "groundstate"
    PROJECT_VERSION: str = "1.0.0"

    # Logging
    LOG_LEVEL: str = "INFO"
    LOG_FORMAT: str = "%(asctime)s - %(levelname)s - %(message)s"
    LOG_FILE: Optional[str] = None

    # Runtime (never numerics)
    MAX_WORKERS: int = 1
    KERNEL_CACHE_SIZE: int = 65536

    @field_validator('LOG_LEVEL', mode='before')
    @classmethod
    def normalize_log_level(cls, v):
        if v is None:
            return "INFO"
        level = str(v).strip().upper()
        if level not in {"DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"}:
            raise ValueError(f"unknown log level: {v}")
        return level

    @field_validator('MAX_WORKERS', 'KERNEL_CACHE_SIZE')
    @classmethod
    def positive(cls, v):
        if v < 1:
            raise ValueError("must be at least 1")
        return v

    @property
    def artifact_version(self) -> str:
        return f"{self.PROJECT_NAME} {self.PROJECT_VERSION}"


settings = Settings()

"""Application configuration using Pydantic Settings.

Loads configuration from environment variables (prefixed ``PQNORM_``) and a
``.env`` file. Command-line flags override these per invocation.
"""

from functools import lru_cache
from typing import Literal

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Application settings loaded from environment variables."""

    model_config = SettingsConfigDict(
        env_prefix="PQNORM_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=True,
        extra="ignore",
    )

    # ============ Application Settings ============
    APP_NAME: str = "pqnorm"
    APP_VERSION: str = "0.1.0"

    # ============ Search Settings ============
    SEED: int = Field(
        default=0,
        description="Default seed for every randomized search",
    )
    BUDGET: int = Field(
        default=64,
        ge=1,
        description="Local search steps per restart",
    )
    RESTARTS: int = Field(
        default=4,
        ge=1,
        description="Random restarts per search on top of structured seeds",
    )
    LEVEL_CAP: int = Field(
        default=4,
        ge=1,
        description="Largest matrix level explored by sup-type searches",
    )
    LENGTH_FACTOR: int = Field(
        default=2,
        ge=1,
        description="Decomposition length cap as a multiple of the input term count",
    )

    # ============ Tolerance Settings ============
    CLOSED_FORM_TOL: float = Field(
        default=1e-9,
        description="Agreement tolerance for closed-form evaluations",
    )
    OPTIMIZER_TOL: float = Field(
        default=1e-3,
        description="Relative acceptance tolerance for optimizer-backed bounds",
    )
    SATURATION_TOL: float = Field(
        default=5e-3,
        description="Relaxed tolerance for sup-type saturation targets",
    )
    COMPRESS_THRESHOLD: float = Field(
        default=1e-14,
        description="Coefficients whose entries all stay below this are dropped by compress",
    )
    RANK_TOL: float = Field(
        default=1e-10,
        description="Singular value cutoff for rank and support detection",
    )

    # ============ Logging Settings ============
    LOG_LEVEL: str = "WARNING"
    LOG_FORMAT: Literal["text", "json"] = "text"


@lru_cache
def get_settings() -> Settings:
    """Get cached settings instance."""
    return Settings()


# Global settings instance
settings = get_settings()

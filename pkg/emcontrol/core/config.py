from pathlib import Path
from typing import Optional

from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


PACKAGED_CONFIGS_DIR = Path(__file__).resolve().parent.parent / "configs"


class Settings(BaseSettings):
    """Process-wide settings, read from EMCONTROL_* environment variables or .env"""

    model_config = SettingsConfigDict(
        env_prefix="EMCONTROL_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",  # Ignore extra environment variables
        env_parse_none_str="",  # Treat empty strings as None
    )

    # Logging Configuration
    log_level: str = Field(
        default="INFO",
        description="Logging level (DEBUG, INFO, WARNING, ERROR, CRITICAL)"
    )
    log_file: Optional[str] = Field(
        default=None,
        description="Path to log file (optional). If not set, logs only to console."
    )

    # Execution Configuration
    workers: int = Field(
        default=1,
        ge=1,
        description="Maximum number of runs executed concurrently (EMCONTROL_WORKERS)"
    )
    results_dir: str = Field(
        default="results",
        description="Default output directory when a config does not name one"
    )
    configs_dir: str = Field(
        default=str(PACKAGED_CONFIGS_DIR),
        description="Directory searched for shipped experiment configs"
    )

    @field_validator("log_level")
    @classmethod
    def validate_log_level(cls, v: str) -> str:
        """Normalize and validate the logging level name"""
        level = v.upper()
        if level not in {"DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"}:
            raise ValueError(f"Unknown log level: {v}")
        return level


settings = Settings()

import os
from typing import Any

from pydantic import BaseModel, Field

ENV_PREFIX = "CS_"


class CSConfig(BaseModel):
    """Configuration for verification runs and the algebra kernels."""

    # Logging configuration
    log_level: str = Field(
        default="INFO",
        description="Logging level (DEBUG, INFO, WARNING, ERROR, CRITICAL)",
        pattern="^(DEBUG|INFO|WARNING|ERROR|CRITICAL)$",
    )
    log_format: str = Field(
        default="json",
        description="Log format (json for structured, simple for human-readable)",
        pattern="^(json|simple)$",
    )
    log_file: str | None = Field(
        default=None, description="Optional log file path (logs to stderr by default)"
    )
    enable_debug_mode: bool = Field(
        default=False, description="Enable debug mode with checkpoints and dumps"
    )
    log_slow_cases: bool = Field(
        default=True,
        description="Log suite cases that take longer than log_slow_case_threshold",
    )
    log_slow_case_threshold: float = Field(
        default=5.0, ge=0.1, description="Threshold in seconds for slow case logging"
    )

    # Window widening
    enable_window_widening: bool = Field(
        default=True, description="Retry truncated computations with a wider window"
    )
    max_window_doublings: int = Field(
        default=6, ge=1, le=10, description="Maximum number of window doublings"
    )
    initial_window_depth: int = Field(
        default=4, ge=1, description="Initial truncation depth for vertex series"
    )

    # Suite runner
    seed: int = Field(default=1, description="Seed for randomized suite cases")
    workers: int = Field(default=1, ge=1, le=64, description="Parallel case workers")
    trials: int = Field(default=10, ge=1, description="Random cases per grid point")

    @classmethod
    def from_env(cls, **overrides: Any) -> "CSConfig":
        """Build a config from CS_* environment variables.

        Args:
            **overrides: Values that take precedence over the environment

        Returns:
            Validated configuration
        """
        values: dict[str, Any] = {}
        for name in cls.model_fields:
            raw = os.getenv(ENV_PREFIX + name.upper())
            if raw is not None:
                values[name] = raw
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls.model_validate(values)

"""
Configuration management for the reduction toolkit.
Holds every budget and default in one place; values come from CLI flags.
"""

from typing import Optional


class Config:
    """Configuration class for the toolkit."""

    def __init__(self, **overrides):
        # Closure search over F_{p^k}
        self.K_MAX: int = int(overrides.get("k_max", 8))
        self.MAX_CANDIDATES: int = int(overrides.get("max_candidates", 10 ** 7))
        self.ENUMERATION_WORKERS: int = int(overrides.get("workers", 1))

        # Resultant matrices
        self.MAX_COLUMNS: int = int(overrides.get("max_columns", 2000))
        self.MAX_SYLVESTER_DEGREE: int = int(overrides.get("max_sylvester_degree", 4000))

        # Plaisted encoder: cap on M = product of the variable primes
        self.MAX_MODULUS: int = int(overrides.get("max_modulus", 10 ** 6))

        # Squaring
        self.DEFAULT_LAMBDA: int = int(overrides.get("default_lambda", 3))
        field_size = overrides.get("field_size")
        self.FIELD_SIZE: Optional[int] = int(field_size) if field_size is not None else None
        self.DEFAULT_SEED: int = int(overrides.get("seed", 0))

        # Logging
        self.LOG_LEVEL: str = str(overrides.get("log_level", "WARNING")).upper()
        self.LOG_FILE: Optional[str] = overrides.get("log_file")

        self._validate_config()

    def _validate_config(self):
        """Validate configuration parameters."""
        for name in ("K_MAX", "MAX_CANDIDATES", "ENUMERATION_WORKERS", "MAX_COLUMNS",
                     "MAX_SYLVESTER_DEGREE", "MAX_MODULUS"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive, got {getattr(self, name)}")
        if self.FIELD_SIZE is not None and self.FIELD_SIZE < 2:
            raise ValueError(f"FIELD_SIZE must be at least 2, got {self.FIELD_SIZE}")
        if not 0 <= self.DEFAULT_SEED < 2 ** 64:
            raise ValueError(f"seed must fit in 64 bits, got {self.DEFAULT_SEED}")
        if self.LOG_LEVEL not in ("TRACE", "DEBUG", "INFO", "SUCCESS", "WARNING", "ERROR", "CRITICAL"):
            raise ValueError(f"unknown log level {self.LOG_LEVEL}")

    def default_field_size(self, n: int) -> int:
        """Sampling-field size for random squaring: the configured value or 4 * 3^(n+1)."""
        if self.FIELD_SIZE is not None:
            return self.FIELD_SIZE
        return 4 * 3 ** (n + 1)

    @property
    def is_parallel(self) -> bool:
        """Check if enumeration may fan out to worker processes."""
        return self.ENUMERATION_WORKERS > 1

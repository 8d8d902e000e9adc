"""
Default configuration for the pclp engine.
"""

import os
from typing import Any, Dict, Optional

from dotenv import load_dotenv
from pydantic import BaseModel, Field, field_validator, model_validator

# Load environment variables
load_dotenv()

def get_env_bool(key: str, default: bool = False) -> bool:
    """Get boolean value from environment variable."""
    value = os.getenv(key, str(default)).lower()
    return value in ('true', '1', 'yes', 'on')

def get_env_int(key: str, default: int = 0) -> int:
    """Get integer value from environment variable."""
    try:
        return int(os.getenv(key, str(default)))
    except ValueError:
        return default

def get_env_float(key: str, default: float = 0.0) -> float:
    """Get float value from environment variable."""
    try:
        return float(os.getenv(key, str(default)))
    except ValueError:
        return default

def get_env_optional_int(key: str) -> Optional[int]:
    value = os.getenv(key)
    if value is None or not value.strip():
        return None
    try:
        return int(value)
    except ValueError:
        return None

def get_mode_config(mode: str) -> dict:
    """
    Get estimator-specific configuration from environment variables.

    Args:
        mode: EXACT or MC

    Returns:
        dict: Mode-specific configuration
    """
    mode = mode.upper()

    if mode == "MC":
        return {
            # ===== Monte-Carlo Newton updates =====
            "mc_newton_max_iter": get_env_int("MC_NEWTON_MAX_ITER", 50),
            "mc_newton_tol": get_env_float("MC_NEWTON_TOL", 1e-8),
            # each iteration draws a fresh sample, so far fewer are used
            "iters": get_env_int("MC_ITERS", 20),
            "tol": get_env_float("MC_TOL", 1e-6),
            "mode": "mc",
        }

    return {
        # ===== Exact Newton updates =====
        "newton_max_iter": get_env_int("EXACT_NEWTON_MAX_ITER", get_env_int("PCLP_NEWTON_MAX_ITER", 50)),
        "newton_tol": get_env_float("EXACT_NEWTON_TOL", get_env_float("PCLP_NEWTON_TOL", 1e-10)),
        "iters": get_env_int("EXACT_ITERS", get_env_int("PCLP_ITERS", 1000)),
        "tol": get_env_float("EXACT_TOL", get_env_float("PCLP_TOL", 1e-9)),
        "mode": "exact",
    }

DEFAULT_CONFIG = {
    # ===== Search =====
    "depth": get_env_int("PCLP_DEPTH", 8),
    "exact_tree_limit": get_env_int("PCLP_EXACT_TREE_LIMIT", 100_000),

    # ===== Estimation =====
    "mode": os.getenv("PCLP_MODE", "exact"),  # exact, mc
    "rounds": get_env_int("PCLP_ROUNDS", 1),
    "iters": get_env_int("PCLP_ITERS", 1000),
    "tol": get_env_float("PCLP_TOL", 1e-9),
    "newton_max_iter": get_env_int("PCLP_NEWTON_MAX_ITER", 50),
    "newton_tol": get_env_float("PCLP_NEWTON_TOL", 1e-10),
    "bracket": get_env_float("PCLP_BRACKET", 30.0),
    "mc_newton_max_iter": get_env_int("PCLP_MC_NEWTON_MAX_ITER", 50),
    "mc_newton_tol": get_env_float("PCLP_MC_NEWTON_TOL", 1e-8),
    "candidate_cap": get_env_int("PCLP_CANDIDATE_CAP", 10_000),
    "warm_start": get_env_bool("PCLP_WARM_START", True),

    # ===== Sampling =====
    "seed": get_env_optional_int("PCLP_SEED"),
    "samples": get_env_int("PCLP_SAMPLES", 10_000),
    "burnin": get_env_int("PCLP_BURNIN", 1000),
    "thin": get_env_int("PCLP_THIN", 1),
    "retry_budget": get_env_int("PCLP_RETRY_BUDGET", 10_000),
    "proposal": os.getenv("PCLP_PROPOSAL", "uniform"),  # uniform, moments
    "combined": os.getenv("PCLP_COMBINED", "joint"),  # joint, corpus

    # ===== Logging =====
    "log_level": os.getenv("PCLP_LOG", "WARNING"),
    "debug": get_env_bool("PCLP_DEBUG", False),
}


class RunConfig(BaseModel):
    """Validated configuration for one CLI run."""

    program: Optional[str] = None
    corpus: Optional[str] = None
    model: Optional[str] = None
    out: Optional[str] = None

    depth: int = Field(default=DEFAULT_CONFIG["depth"], gt=0)
    mode: str = DEFAULT_CONFIG["mode"]
    seed: Optional[int] = DEFAULT_CONFIG["seed"]
    samples: int = Field(default=DEFAULT_CONFIG["samples"], gt=0)
    burnin: int = Field(default=DEFAULT_CONFIG["burnin"], ge=0)
    thin: int = Field(default=DEFAULT_CONFIG["thin"], gt=0)
    rounds: int = Field(default=DEFAULT_CONFIG["rounds"], gt=0)
    iters: int = Field(default=DEFAULT_CONFIG["iters"], gt=0)
    tol: float = Field(default=DEFAULT_CONFIG["tol"], gt=0)
    newton_max_iter: int = Field(default=DEFAULT_CONFIG["newton_max_iter"], gt=0)
    newton_tol: float = Field(default=DEFAULT_CONFIG["newton_tol"], gt=0)
    bracket: float = Field(default=DEFAULT_CONFIG["bracket"], gt=0)
    mc_newton_max_iter: int = Field(default=DEFAULT_CONFIG["mc_newton_max_iter"], gt=0)
    mc_newton_tol: float = Field(default=DEFAULT_CONFIG["mc_newton_tol"], gt=0)
    candidate_cap: int = Field(default=DEFAULT_CONFIG["candidate_cap"], gt=0)
    warm_start: bool = DEFAULT_CONFIG["warm_start"]
    retry_budget: int = Field(default=DEFAULT_CONFIG["retry_budget"], gt=0)
    proposal: str = DEFAULT_CONFIG["proposal"]
    combined: str = DEFAULT_CONFIG["combined"]
    exact_tree_limit: int = Field(default=DEFAULT_CONFIG["exact_tree_limit"], gt=0)
    strict: bool = False
    debug: bool = DEFAULT_CONFIG["debug"]

    @field_validator("mode")
    @classmethod
    def _check_mode(cls, value: str) -> str:
        value = value.lower()
        if value not in ("exact", "mc"):
            raise ValueError("mode must be 'exact' or 'mc'")
        return value

    @field_validator("proposal")
    @classmethod
    def _check_proposal(cls, value: str) -> str:
        value = value.lower()
        if value not in ("uniform", "moments"):
            raise ValueError("proposal must be 'uniform' or 'moments'")
        return value

    @field_validator("combined")
    @classmethod
    def _check_combined(cls, value: str) -> str:
        value = value.lower()
        if value not in ("joint", "corpus"):
            raise ValueError("combined must be 'joint' or 'corpus'")
        return value

    @field_validator("seed")
    @classmethod
    def _check_seed(cls, value: Optional[int]) -> Optional[int]:
        if value is not None and not 0 <= value < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        return value

    @model_validator(mode="after")
    def _mc_needs_seed(self) -> "RunConfig":
        if self.mode == "mc" and self.seed is None:
            raise ValueError("mode=mc requires a seed")
        return self

    @classmethod
    def from_overrides(cls, overrides: Dict[str, Any]) -> "RunConfig":
        """DEFAULT_CONFIG, then the mode-specific settings, then explicit overrides."""
        config = DEFAULT_CONFIG.copy()
        mode = overrides.get("mode") or config["mode"]
        config.update(get_mode_config(mode))
        config.update({key: value for key, value in overrides.items() if value is not None})
        return cls(**{key: value for key, value in config.items() if key in cls.model_fields})

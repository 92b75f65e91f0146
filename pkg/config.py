"""
Configuration settings for the tiling toolkit
"""
from pydantic import field_validator
from pydantic_settings import BaseSettings
from typing import Optional

class Settings(BaseSettings):
    # App Settings
    log_level: str = "INFO"
    workers: int = 1
    seed: int = 0

    # Storage
    state_dir: str = "./state"
    class_cache_dir: Optional[str] = None
    appendix_path: str = "data/appendix_12_no_tt4.txt"
    appendix_sha256: str = "cc340d98f7ba8856379fd5a281b3c1174c426249f630dd6862ed74df8db292a3"

    # Engine limits
    max_vertices: int = 64
    canonical_cap: int = 16
    generation_cap: int = 9
    dp_vertex_limit: int = 24

    # Reproduction sample counts
    duality_samples: int = 1000
    claim_samples: int = 500
    extendability_samples: int = 200
    linking_samples: int = 500
    fact_samples: int = 500
    relabel_samples: int = 1000
    phase_budget_seconds: float = 900.0

    class Config:
        env_file = ".env"
        env_file_encoding = 'utf-8'
        case_sensitive = False
        extra = "ignore"

    @field_validator("workers")
    @classmethod
    def _workers_positive(cls, value: int) -> int:
        if value < 1:
            raise ValueError("workers must be at least 1")
        return value

    @field_validator("phase_budget_seconds")
    @classmethod
    def _budget_positive(cls, value: float) -> float:
        if value <= 0:
            raise ValueError("phase_budget_seconds must be positive")
        return value

settings = Settings()

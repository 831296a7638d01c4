"""
settings.py
-----------
Loads config/pvar.yaml once and exposes it as a validated pydantic model.

PVAR_CONFIG points at an alternative YAML file, PVAR_TOL overrides the float
tolerance. A missing file falls back to the built-in defaults.
"""

from __future__ import annotations

import os
from functools import lru_cache
from pathlib import Path

import yaml
from pydantic import BaseModel, Field, ValidationError as PydanticValidationError, field_validator

from errors import ConfigError

REPO_ROOT = Path(__file__).parent.parent
CONFIG_PATH = REPO_ROOT / "config" / "pvar.yaml"


class QuadratureSettings(BaseModel):
    order: int = Field(32, ge=2)
    rel_tol: float = Field(1e-12, gt=0)
    max_panels: int = Field(4096, ge=1)
    gauss_max_nodes: int = Field(1024, ge=8)


class PathSettings(BaseModel):
    reports_dir: str = "reports"
    logs_dir: str = "logs"


class Settings(BaseModel):
    tolerance: float = Field(1e-10, gt=0)
    var_clamp: float = Field(1e-12, ge=0)
    degeneracy_rel: float = Field(1e-12, gt=0)
    quadrature: QuadratureSettings = QuadratureSettings()
    grid_points: int = Field(64, ge=2)
    default_backend: str = "rational"
    paths: PathSettings = PathSettings()

    @field_validator("default_backend")
    @classmethod
    def _known_backend(cls, value: str) -> str:
        if value not in ("rational", "float"):
            raise ValueError(f"unknown backend '{value}'")
        return value

    @property
    def reports_dir(self) -> Path:
        return REPO_ROOT / self.paths.reports_dir

    @property
    def logs_dir(self) -> Path:
        return REPO_ROOT / self.paths.logs_dir


def load_settings(path: Path | None = None) -> Settings:
    """Read a YAML file into Settings, applying the PVAR_TOL override."""
    path = Path(path or os.environ.get("PVAR_CONFIG") or CONFIG_PATH)
    raw = {}
    if path.exists():
        with open(path, "r") as f:
            raw = yaml.safe_load(f) or {}

    env_tol = os.environ.get("PVAR_TOL")
    if env_tol:
        try:
            raw["tolerance"] = float(env_tol)
        except ValueError as exc:
            raise ConfigError(f"PVAR_TOL is not a number: {env_tol!r}") from exc

    try:
        return Settings(**raw)
    except PydanticValidationError as exc:
        raise ConfigError(f"invalid configuration in {path}: {exc}") from exc


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    return load_settings()

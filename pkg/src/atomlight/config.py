"""Run configuration: plain-text key = value files plus flag overrides.

The effective configuration is echoed into every emitted artifact so a run
can be reproduced exactly.  Unknown keys are rejected with the offending
line number.  The environment variable ATOMLIGHT_CONFIG names a default
config file.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field, fields

from .errors import DomainError

ENV_CONFIG = "ATOMLIGHT_CONFIG"


class ConfigError(DomainError):
    pass


@dataclass
class RunConfig:
    convention: str = "hl"            # "hl" | "paper"
    omega_ev: float | None = None     # transition frequency override
    a0_ev_inv: float | None = None    # Bohr radius override
    sigma_p_ev: float | None = None   # COM momentum spread, absolute eV
    sigma_p_mc: float | None = None   # ... or in units of M c
    kuv_ev: float | None = None       # self-energy cutoff
    seed: int = 1
    samples: int = 200_000
    output_format: str = "json"       # "json" | "csv"
    tolerances: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "convention": self.convention,
            "omega_ev": self.omega_ev,
            "a0_ev_inv": self.a0_ev_inv,
            "sigma_p_ev": self.sigma_p_ev,
            "sigma_p_mc": self.sigma_p_mc,
            "kuv_ev": self.kuv_ev,
            "seed": self.seed,
            "samples": self.samples,
            "output_format": self.output_format,
            "tolerances": dict(self.tolerances),
        }


_FLOAT_KEYS = {"omega_ev", "a0_ev_inv", "sigma_p_ev", "sigma_p_mc", "kuv_ev"}
_INT_KEYS = {"seed", "samples"}
_STR_KEYS = {"convention", "output_format"}


def load_config(path: str) -> RunConfig:
    """Parse a `key = value` file (# comments, blank lines allowed)."""
    cfg = RunConfig()
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: malformed line {raw.strip()!r}")
            key, _, value = (p.strip() for p in line.partition("="))
            if key.startswith("tol_"):
                try:
                    cfg.tolerances[key] = float(value)
                except ValueError:
                    raise ConfigError(f"{path}:{lineno}: bad float for {key}") from None
                continue
            if key in _FLOAT_KEYS:
                try:
                    setattr(cfg, key, float(value))
                except ValueError:
                    raise ConfigError(f"{path}:{lineno}: bad float for {key}") from None
            elif key in _INT_KEYS:
                try:
                    setattr(cfg, key, int(value))
                except ValueError:
                    raise ConfigError(f"{path}:{lineno}: bad integer for {key}") from None
            elif key in _STR_KEYS:
                setattr(cfg, key, value)
            else:
                raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
    _validate(cfg, path)
    return cfg


def _validate(cfg: RunConfig, origin: str):
    if cfg.convention not in ("hl", "paper"):
        raise ConfigError(f"{origin}: convention must be 'hl' or 'paper'")
    if cfg.output_format not in ("json", "csv"):
        raise ConfigError(f"{origin}: output_format must be 'json' or 'csv'")


def default_config() -> RunConfig:
    """RunConfig from ATOMLIGHT_CONFIG when set, else defaults."""
    path = os.environ.get(ENV_CONFIG)
    if path:
        return load_config(path)
    return RunConfig()

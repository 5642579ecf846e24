"""Flat dotted-key configuration files.

Grammar: one ``section.key = value`` per line, ``#`` comments, blank lines
ignored.  Values are parsed on demand by the typed getters; list values are
comma-separated.  Unknown keys are tolerated (commands read what they need),
malformed lines and bad values raise ConfigError naming the key.
"""

from __future__ import annotations

import math
import re
from typing import Dict, List, Optional

from .errors import ConfigError
from .free_baseline import LatticeSpec
from .hubbard_rg import ModelInputs
from .scale_flow import SectorDomain

_KEY_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*(\.[A-Za-z_][A-Za-z0-9_]*)*$")


def parse_config_text(text: str) -> Dict[str, str]:
    out: Dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if not _KEY_RE.match(key):
            raise ConfigError(f"line {lineno}: malformed key {key!r}")
        out[key] = value
    return out


def load_config(path) -> "RunConfig":
    with open(path, "r", encoding="utf-8") as fh:
        return RunConfig(parse_config_text(fh.read()), source=str(path))


class RunConfig:
    """Typed access to a flat key/value configuration."""

    def __init__(self, raw: Dict[str, str], source: str = "<memory>"):
        self.raw = dict(raw)
        self.source = source

    def _get(self, key: str, default):
        if key in self.raw:
            return self.raw[key]
        if default is _REQUIRED:
            raise ConfigError(f"missing required key {key!r} in {self.source}")
        return default

    def get_str(self, key: str, default=None):
        v = self._get(key, default)
        return v if v is None or isinstance(v, str) else str(v)

    def get_float(self, key: str, default=None) -> Optional[float]:
        v = self._get(key, default)
        if v is None or isinstance(v, float):
            return v
        try:
            x = float(v)
        except ValueError as exc:
            raise ConfigError(f"key {key!r}: not a number: {v!r}") from exc
        if not math.isfinite(x):
            raise ConfigError(f"key {key!r}: non-finite value {v!r}")
        return x

    def get_int(self, key: str, default=None) -> Optional[int]:
        v = self._get(key, default)
        if v is None or isinstance(v, int):
            return v
        try:
            return int(str(v), 10)
        except ValueError as exc:
            raise ConfigError(f"key {key!r}: not an integer: {v!r}") from exc

    def get_floats(self, key: str, default=None) -> Optional[List[float]]:
        v = self._get(key, default)
        if v is None or isinstance(v, list):
            return v
        out = []
        for part in str(v).split(","):
            part = part.strip()
            if not part:
                continue
            try:
                out.append(float(part))
            except ValueError as exc:
                raise ConfigError(f"key {key!r}: bad list entry {part!r}") from exc
        if not out:
            raise ConfigError(f"key {key!r}: empty list")
        return out

    def require_float(self, key: str) -> float:
        return self.get_float(key, _REQUIRED)

    # -- composite readers ----------------------------------------------

    def model_inputs(self, lam: Optional[float] = None) -> ModelInputs:
        if lam is None:
            lam = self.require_float("model.lambda")
        return ModelInputs(
            lam=lam,
            v0=self.get_float("model.v0", 1.0),
            v2pf=self.get_float("model.v2pf", 1.0),
            mu=self.get_float("model.mu", 0.5),
            gamma=self.get_float("model.gamma", 2.0),
        )

    def lambda_grid(self) -> List[float]:
        grid = self.get_floats("model.lambda_grid", None)
        if grid is not None:
            return grid
        return [self.require_float("model.lambda")]

    def sector(self) -> Optional[SectorDomain]:
        eps = self.get_float("sector.epsilon", None)
        if eps is None:
            return None
        return SectorDomain(epsilon=eps, delta=self.get_float("sector.delta", math.pi / 4))

    def lattice(self) -> LatticeSpec:
        return LatticeSpec(
            L=self.get_int("lattice.L", 256),
            beta=self.get_float("lattice.beta", 256.0),
            M=self.get_int("lattice.M", 20),
            mu=self.get_float("lattice.mu", self.get_float("model.mu", 0.5)),
            gamma=self.get_float("lattice.gamma", self.get_float("model.gamma", 2.0)),
        )


_REQUIRED = object()

"""Toolkit configuration: one key = value text file for every default.

Unknown keys are rejected so typos fail loudly.  All values here feed
directly into module defaults (screening threshold, IC weight, WSD window,
policies); the file is optional and absent keys keep their defaults.
"""

from __future__ import annotations

from dataclasses import dataclass, fields
from pathlib import Path

from .corrections import HardTranslationConfig
from .errors import ConfigurationError
from .screening import ScreeningConfig


@dataclass
class ToolkitConfig:
    screening_threshold: float = 0.21
    screening_min_candidates: int = 3
    screening_oov_policy: str = "review"
    ic_k: float = 0.5
    wsd_window: int = 2
    wsd_representation: str = "gloss"
    eval_pos: str = "noun"
    hard_max_length: int = 4
    hard_interior_particles: str = "的,地"

    def screening(self) -> ScreeningConfig:
        return ScreeningConfig(
            threshold=self.screening_threshold,
            min_candidates_to_filter=self.screening_min_candidates,
            oov_policy=self.screening_oov_policy,
        )

    def hard_translation(self) -> HardTranslationConfig:
        particles = tuple(p for p in self.hard_interior_particles.split(",") if p)
        return HardTranslationConfig(self.hard_max_length, particles)

    def as_dict(self) -> dict:
        return {_key_name(f.name): getattr(self, f.name) for f in fields(self)}


def _key_name(field_name: str) -> str:
    section, _, rest = field_name.partition("_")
    return f"{section}.{rest}"


def _field_name(key: str) -> str:
    return key.replace(".", "_", 1)


def load_config(path) -> ToolkitConfig:
    cfg = ToolkitConfig()
    valid = {f.name: f.type for f in fields(ToolkitConfig)}
    for number, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigurationError(f"{path}:{number}: expected key = value")
        key, _, value = line.partition("=")
        name = _field_name(key.strip())
        if name not in valid:
            raise ConfigurationError(f"{path}:{number}: unknown key {key.strip()!r}")
        current = getattr(cfg, name)
        try:
            if isinstance(current, bool):
                parsed = value.strip().lower() in ("1", "true", "yes")
            elif isinstance(current, int):
                parsed = int(value.strip())
            elif isinstance(current, float):
                parsed = float(value.strip())
            else:
                parsed = value.strip()
        except ValueError:
            raise ConfigurationError(f"{path}:{number}: bad value for {key.strip()!r}") from None
        setattr(cfg, name, parsed)
    return cfg


def write_default_config(path) -> None:
    cfg = ToolkitConfig()
    lines = ["# zhwn configuration: key = value, # starts a comment"]
    for key, value in cfg.as_dict().items():
        lines.append(f"{key} = {value}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")

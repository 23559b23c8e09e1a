"""Bundled example configurations."""
from __future__ import annotations

from importlib import resources

NAMES = ("airy", "bessel", "mixed2")


def preset_text(name: str) -> str:
    if name not in NAMES:
        raise KeyError(f"unknown preset {name!r}; choose from {', '.join(NAMES)}")
    return resources.files(__name__).joinpath(f"{name}.json").read_text()


def load_preset(name: str):
    from ..giventaldata import GiventalData

    return GiventalData.from_json(preset_text(name))

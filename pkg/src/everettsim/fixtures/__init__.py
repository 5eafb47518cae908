"""Committed circuit fixtures, shipped as package data."""

from importlib.resources import files

SUPERDENSE = "superdense_pq.ecirc"
TELEPORT = "teleport.ecirc"


def read(name: str) -> str:
    return (files(__package__) / name).read_text(encoding="utf-8")

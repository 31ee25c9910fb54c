"""Graphs shipped with the package, loaded by name (``k4``, ``theta``, ...)."""

import json
from importlib.resources import files

from ..graph import Multigraph


def names() -> list[str]:
    return sorted(p.name[:-5] for p in files(__name__).iterdir() if p.name.endswith(".json"))


def load_json(name: str) -> dict:
    return json.loads(files(__name__).joinpath(f"{name}.json").read_text())


def load_graph(name: str) -> Multigraph:
    return Multigraph.from_json(load_json(name))

"""Feasibility caps for the exhaustive routines.

Defaults can be overridden globally through the ``CONTAINERLAB_CAP``
environment variable, e.g. ``CONTAINERLAB_CAP="exact_c4_n=26,c4_count_n=8"``.
"""

import os

from .errors import InvalidConfig

DEFAULTS = {
    "graph_n": 128,
    "exact_c4_n": 24,
    "container_enum_n": 24,
    "metric_hypergraph_vertices": 4096,
    "metric_colorings": 10**10,
    "metric_product_enum": 2**17,
    "max_independent_vertices": 24,
    "c4_count_n": 7,
    "kkfree_n": 7,
}

ENV_VAR = "CONTAINERLAB_CAP"


def parse_overrides(text):
    """Parse ``"name=value,name=value"`` into a dict of integer caps."""
    out = {}
    if not text:
        return out
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        if "=" not in item:
            raise InvalidConfig(f"cap override {item!r} is not name=value")
        name, value = item.split("=", 1)
        name = name.strip()
        if name not in DEFAULTS:
            raise InvalidConfig(f"unknown cap {name!r}; known: {sorted(DEFAULTS)}")
        try:
            out[name] = int(float(value))
        except ValueError as exc:
            raise InvalidConfig(f"cap {name!r} needs an integer, got {value!r}") from exc
    return out


_overrides = {}


def set_overrides(mapping):
    """Install process-wide overrides (used by the CLI's ``--cap``)."""
    _overrides.clear()
    _overrides.update(mapping)


def get(name):
    if name in _overrides:
        return _overrides[name]
    env = parse_overrides(os.environ.get(ENV_VAR, ""))
    if name in env:
        return env[name]
    return DEFAULTS[name]

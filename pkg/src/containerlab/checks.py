"""A named inequality with both sides kept, the unit every report is built from."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

RELATIONS = {
    "<=": lambda a, b: a <= b,
    "<": lambda a, b: a < b,
    ">=": lambda a, b: a >= b,
    ">": lambda a, b: a > b,
    "==": lambda a, b: a == b,
    "~=": None,
}

# where a reference value comes from
TAGS = ("literature", "definition", "oracle")


@dataclass
class Check:
    name: str
    lhs: object
    rhs: object
    relation: str = "<="
    asserted: bool = True
    tol: float = 0.0
    tag: str = "oracle"
    note: str = ""

    def __post_init__(self):
        if self.relation not in RELATIONS:
            raise ValueError(f"unknown relation {self.relation!r}")
        if self.tag not in TAGS:
            raise ValueError(f"unknown tag {self.tag!r}")

    @property
    def holds(self):
        if self.relation == "~=":
            return math.isclose(float(self.lhs), float(self.rhs), rel_tol=0, abs_tol=self.tol)
        return bool(RELATIONS[self.relation](self.lhs, self.rhs))

    def to_dict(self):
        d = asdict(self)
        d["lhs"] = _plain(self.lhs)
        d["rhs"] = _plain(self.rhs)
        d["status"] = "pass" if self.holds else "fail"
        return d


def _plain(x):
    if isinstance(x, bool) or x is None or isinstance(x, str):
        return x
    if isinstance(x, int):
        # keep big integers exact without breaking JSON readers
        return x if abs(x) < 2**53 else str(x)
    try:
        f = float(x)
    except (TypeError, ValueError):
        return str(x)
    if math.isinf(f) or math.isnan(f):
        return str(f)
    return f

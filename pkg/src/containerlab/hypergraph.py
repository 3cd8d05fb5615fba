"""3-uniform hypergraphs, co-degree statistics and the container-theorem hypotheses."""

from __future__ import annotations

import bisect
import itertools
import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational

from .errors import EmptyVertexSet, InvalidParameter, ZeroAverageDegree


@dataclass(frozen=True)
class Hypergraph3:
    N: int
    edges: tuple = field(default=())

    def __post_init__(self):
        canon = sorted({tuple(sorted(e)) for e in self.edges})
        if len(canon) != len(self.edges):
            raise InvalidParameter("duplicate hyperedges")
        for e in canon:
            if len(e) != 3 or len(set(e)) != 3:
                raise InvalidParameter(f"hyperedge {e} does not have three distinct vertices")
            if not (0 <= e[0] and e[2] < self.N):
                raise InvalidParameter(f"hyperedge {e} outside [0, {self.N})")
        object.__setattr__(self, "edges", tuple(canon))

    def __contains__(self, triple):
        t = tuple(sorted(triple))
        i = bisect.bisect_left(self.edges, t)
        return i < len(self.edges) and self.edges[i] == t

    def dumps(self):
        lines = [f"N={self.N}"] + [f"{a} {b} {c}" for a, b, c in self.edges]
        return "\n".join(lines) + "\n"

    @classmethod
    def loads(cls, text):
        lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
        if not lines or not lines[0].startswith("N="):
            raise InvalidParameter("hypergraph text must start with 'N=<int>'")
        N = int(lines[0][2:])
        return cls(N, tuple(tuple(int(x) for x in ln.split()) for ln in lines[1:]))


@dataclass(frozen=True)
class DegreeStats:
    delta1: int
    delta2: int
    delta3: int
    dbar: Fraction


def degree_stats(h):
    """Exact maximum co-degrees of 1-, 2- and 3-sets and the average degree ``3e/N``."""
    if h.N < 1:
        raise EmptyVertexSet("degree statistics need at least one vertex")
    singles = Counter()
    pairs = Counter()
    for a, b, c in h.edges:
        singles.update((a, b, c))
        pairs.update(((a, b), (a, c), (b, c)))
    return DegreeStats(
        delta1=max(singles.values(), default=0),
        delta2=max(pairs.values(), default=0),
        delta3=1 if h.edges else 0,
        dbar=Fraction(3 * len(h.edges), h.N),
    )


def degree_stats_naive(h):
    """Co-degrees by scanning every 1-, 2- and 3-subset against every edge; O(N^3 e)."""
    if h.N < 1:
        raise EmptyVertexSet("degree statistics need at least one vertex")
    es = [set(e) for e in h.edges]
    out = []
    for j in (1, 2, 3):
        best = 0
        for sigma in itertools.combinations(range(h.N), j):
            s = set(sigma)
            best = max(best, sum(1 for e in es if s <= e))
        out.append(best)
    return DegreeStats(out[0], out[1], out[2], Fraction(3 * len(h.edges), h.N))


def _exact(x):
    return x if isinstance(x, Rational) else Fraction(x)


def delta_from_stats(stats, p):
    """``4 D2 / (dbar p) + 2 D3 / (dbar p^2)``; exact when ``p`` is rational."""
    if not 0 < p <= 1:
        raise InvalidParameter(f"p must lie in (0, 1], got {p}")
    if stats.dbar == 0:
        raise ZeroAverageDegree("average degree is zero")
    p = _exact(p)
    dbar = _exact(stats.dbar)
    return Fraction(4 * stats.delta2) / (dbar * p) + Fraction(2 * stats.delta3) / (dbar * p * p)


def delta_hp(h, p):
    return delta_from_stats(degree_stats(h), p)


@dataclass(frozen=True)
class ContainerHypotheses:
    p: Fraction
    alpha: Fraction
    c: int
    delta_hp: Fraction
    container_log_bound: float
    p_ok: bool
    delta_ok: bool

    @property
    def ok(self):
        return self.p_ok and self.delta_ok


def hypotheses_from_stats(stats, N, p, alpha, c=1):
    """Evaluate both container-theorem hypotheses for given co-degree statistics."""
    if not 0 < alpha < 1:
        raise InvalidParameter(f"alpha must lie in (0, 1), got {alpha}")
    if c < 1 or int(c) != c:
        raise InvalidParameter(f"c must be a positive integer, got {c}")
    p, alpha = _exact(p), _exact(alpha)
    dhp = delta_from_stats(stats, p)
    log_bound = 3 ** 9 * c * (1 + math.log(1 / alpha)) * N * float(p) * math.log(1 / p) if p < 1 else 0.0
    return ContainerHypotheses(
        p=p,
        alpha=alpha,
        c=int(c),
        delta_hp=dhp,
        container_log_bound=log_bound,
        p_ok=p <= Fraction(1, 3 ** 6 * int(c)),
        delta_ok=dhp <= alpha / (27 * int(c)),
    )


def hypotheses_check(h, p, alpha, c=1):
    return hypotheses_from_stats(degree_stats(h), h.N, p, alpha, c)


def is_independent(h, vertices):
    return edges_within(h, vertices) == 0


def edges_within(h, vertices):
    s = set(vertices)
    bad = [v for v in s if not 0 <= v < h.N]
    if bad:
        raise InvalidParameter(f"vertices {bad[:5]} outside [0, {h.N})")
    return sum(1 for a, b, c in h.edges if a in s and b in s and c in s)

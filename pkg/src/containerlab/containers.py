"""Fingerprint/container construction for independent sets of a square graph.

The greedy engine repeatedly takes the maximum-degree vertex of the square
restricted to the available set ``A``.  A vertex outside the independent set is
simply dropped from ``A``; a vertex inside it joins the fingerprint ``T`` and
takes its neighbourhood out of ``A`` with it.  Because every decision is read
off ``T``, the container ``T | A`` can be rebuilt from the fingerprint alone.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

from .constants import gamma_and_cstar
from .errors import FingerprintOverflow, InvalidParameter, NotC4Free, NotIndependent, NotReplayable, TooLarge
from .graph import Graph, _rank, bits, is_c4_free, mask_of, min_degree_ordering, proper_square
from . import caps
from .parallel import rng

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class Fingerprint:
    vertices: tuple


@dataclass(frozen=True)
class Container:
    vertices: tuple
    fingerprint: Fingerprint
    removals: tuple = field(default=(), compare=False)

    @property
    def mask(self):
        return mask_of(self.vertices)

    def __len__(self):
        return len(self.vertices)


def _pivot(adj, avail, rank):
    best_key, best_v = None, None
    for v in bits(avail):
        key = (-(adj[v] & avail).bit_count(), rank[v])
        if best_key is None or key < best_key:
            best_key, best_v = key, v
    return best_v


def peel(square, avail, in_set, rank, stop):
    """Run the greedy engine from the available mask ``avail``.

    ``in_set(v)`` answers membership queries, ``stop(T, A)`` ends the run.
    Returns ``(T, A, removals)`` where ``removals[k]`` counts vertices that left
    ``A`` at step ``k``.
    """
    adj = square.adj
    T = []
    removals = []
    A = avail
    while A and not stop(T, A):
        v = _pivot(adj, A, rank)
        if in_set(v):
            T.append(v)
            new = A & ~(1 << v) & ~adj[v]
        else:
            new = A & ~(1 << v)
        removals.append((A ^ new).bit_count())
        A = new
    return T, A, removals


def _universe(square, within):
    return square.vertex_mask if within is None else within


def _size_stop(stop_size):
    return lambda T, A: A.bit_count() <= stop_size


def kw_container(square, I, tiebreak=None, stop_size=0, within=None):
    """Fingerprint and container of the independent set ``I`` of ``square[within]``."""
    universe = _universe(square, within)
    imask = mask_of(I)
    if imask & ~universe:
        raise InvalidParameter("I must lie inside the vertex universe")
    if stop_size >= universe.bit_count() and universe:
        raise InvalidParameter("stop_size must be smaller than the number of vertices")
    for v in bits(imask):
        if square.adj[v] & imask:
            raise NotIndependent(f"vertex {v} has a neighbour inside I")
    rank = _rank(tiebreak, square.n)
    T, A, removals = peel(square, universe, lambda v: bool(imask >> v & 1), rank, _size_stop(stop_size))
    fp = Fingerprint(tuple(T))
    return fp, Container(tuple(sorted(set(T) | set(bits(A)))), fp, tuple(removals))


def _replay(square, T, rank, stop, universe):
    T = tuple(T.vertices if isinstance(T, Fingerprint) else T)
    pending = set(T)
    pos = [0]

    def in_set(v):
        k = pos[0]
        if k < len(T) and T[k] == v:
            pos[0] += 1
            pending.discard(v)
            return True
        if v in pending:
            raise NotReplayable(f"fingerprint vertex {v} reached out of order")
        return False

    found, A, removals = peel(square, universe, in_set, rank, stop)
    if pos[0] != len(T):
        raise NotReplayable(f"fingerprint entries {T[pos[0]:]} were never the greedy choice")
    return found, A, removals


def container_for_fingerprint(square, T, tiebreak=None, stop_size=0, within=None):
    """Rebuild the container of fingerprint ``T`` without knowing the independent set."""
    universe = _universe(square, within)
    rank = _rank(tiebreak, square.n)
    found, A, removals = _replay(square, T, rank, _size_stop(stop_size), universe)
    fp = Fingerprint(tuple(found))
    return Container(tuple(sorted(set(found) | set(bits(A)))), fp, tuple(removals))


@dataclass
class ContainerFamily:
    square: Graph
    tiebreak: tuple
    stop_size: int
    within: int
    records: dict

    @property
    def containers(self):
        return list(self.records.values())

    def __len__(self):
        return len(self.records)

    def index_of(self, fp):
        for i, key in enumerate(self.records):
            if key == fp:
                return i
        raise KeyError(fp)

    def covering(self, vertices):
        """Indices of containers that contain the vertex set (mask or iterable)."""
        m = vertices if isinstance(vertices, int) else mask_of(vertices)
        return [i for i, c in enumerate(self.records.values()) if m & ~c.mask == 0]

    def covers(self, vertices):
        return bool(self.covering(vertices))

    def dumps(self):
        lines = [
            f"# graph={self.square.digest()} n={self.square.n}",
            f"# tiebreak={','.join(map(str, self.tiebreak))}",
            f"# stop_size={self.stop_size} within={','.join(map(str, bits(self.within)))}",
        ]
        for fp, c in self.records.items():
            lines.append(f"T: {','.join(map(str, fp.vertices))} | C: {','.join(map(str, c.vertices))}")
        return "\n".join(lines) + "\n"


def enumerate_all_containers(square, tiebreak=None, stop_size=0, max_fingerprint=None, within=None, cap=None):
    """Walk the member/non-member decision tree and collect every (T, C) it reaches."""
    universe = _universe(square, within)
    cap = caps.get("container_enum_n") if cap is None else cap
    if universe.bit_count() > cap:
        raise TooLarge(f"exhaustive container enumeration is capped at {cap} vertices")
    if max_fingerprint is None:
        max_fingerprint = universe.bit_count()
    rank = _rank(tiebreak, square.n)
    adj = square.adj
    records = {}
    stack = [((), universe)]
    while stack:
        T, A = stack.pop()
        if A.bit_count() <= stop_size:
            fp = Fingerprint(T)
            records[fp] = Container(tuple(sorted(set(T) | set(bits(A)))), fp)
            continue
        v = _pivot(adj, A, rank)
        if len(T) >= max_fingerprint:
            raise FingerprintOverflow(f"an independent set needs more than {max_fingerprint} fingerprint vertices")
        stack.append((T + (v,), A & ~(1 << v) & ~adj[v]))
        stack.append((T, A & ~(1 << v)))
    # deterministic order independent of traversal: sort by fingerprint
    ordered = {fp: records[fp] for fp in sorted(records, key=lambda f: f.vertices)}
    tb = tuple(range(square.n)) if tiebreak is None else tuple(tiebreak)
    return ContainerFamily(square, tb, stop_size, universe, ordered)


def independent_sets(g, within=None):
    """Every independent set of ``g[within]`` as a bitmask, the empty set included."""
    universe = g.vertex_mask if within is None else within
    out = []

    def grow(chosen, cand):
        out.append(chosen)
        for v in bits(cand):
            cand &= ~(1 << v)
            grow(chosen | 1 << v, cand & ~g.adj[v])

    grow(0, universe)
    return out


def coverage_failures(family, sets=None):
    """Independent sets of the family's square that no container holds."""
    if sets is None:
        sets = independent_sets(family.square, family.within)
    masks = [c.mask for c in family.containers]
    return [s for s in sets if not any(s & ~m == 0 for m in masks)]


# ---------------------------------------------------------------- sparsifier and presets

@dataclass(frozen=True)
class SparsifierResult:
    F: Graph
    t: float
    seed: int


def sparsify(g, t, seed):
    """Keep each edge independently with probability ``1/t``."""
    if t < 1:
        raise InvalidParameter(f"t must be at least 1, got {t}")
    edges = g.edges()
    draws = rng(seed).random(len(edges))
    kept = [e for e, x in zip(edges, draws) if x < 1.0 / t]
    return SparsifierResult(Graph.from_edges(g.n, kept), t, seed)


def log_cubed_t(n):
    """``t = ln(n)^3``; refused where it drops below 1 and could not thin anything."""
    t = math.log(n) ** 3 if n > 1 else 0.0
    if t < 1:
        raise InvalidParameter(f"t = ln({n})^3 = {t:.3g} < 1; pick t explicitly at this size")
    return t


STOP_PRESETS = ("n3/5", "3sqrt", "kw")


def stop_preset(name, n, b=0.1):
    """Named stop thresholds: ``n^(3/5)``, ``3 sqrt(n)`` and ``(1+3b) sqrt(n)``."""
    # the nudge keeps exact powers such as 32^(3/5) = 8 from flooring to 7
    if name == "n3/5":
        return int(n ** 0.6 + 1e-9)
    if name == "3sqrt":
        return int(3 * math.sqrt(n) + 1e-9)
    if name == "kw":
        return int((1 + 3 * b) * math.sqrt(n) + 1e-9)
    raise InvalidParameter(f"unknown stop preset {name!r}; choose from {STOP_PRESETS}")


# ---------------------------------------------------------------- right containers

@dataclass(frozen=True)
class RightContainer:
    position: int
    vertex: int
    m: int
    right_degree: int
    neighbourhood: tuple
    container: tuple
    fingerprint: tuple
    measure: int
    bound: float
    shortcut: bool

    @property
    def ok(self):
        return self.measure <= self.bound


@dataclass
class RightContainerSet:
    ordering: object
    epsilon: float
    entries: list

    @property
    def measures(self):
        return [e.measure for e in self.entries]

    @property
    def all_ok(self):
        return all(e.ok for e in self.entries)

    def violations(self):
        return [e.position for e in self.entries if not e.ok]

    def by_position(self):
        return {e.position: e for e in self.entries}


def audited_positions(n, epsilon):
    """0-based positions whose 1-based index is at most ``(1 - epsilon) n``."""
    return [i for i in range(n) if i + 1 <= (1 - epsilon) * n]


def shortcut_applies(d, m):
    """Small right-degree case: ``d < sqrt(m) / ln(m)^2``."""
    lg = math.log(m) if m > 1 else 0.0
    if lg == 0:
        return True
    return d < math.sqrt(m) / lg ** 2


def build_right_containers(g, epsilon, tiebreak=None, stop_rule="3sqrt"):
    """Container of each right-neighbourhood with a capped degree measure.

    For position ``i`` (``m = n - i`` vertices left), the right-neighbourhood of
    ``v_i`` is independent in the square of ``G[v_{i+1}..v_n]``; the engine runs
    there, and keeps peeling past the size threshold until the measure
    ``sum_{v in C} d_{G_i}(v)`` is at most ``(1 + epsilon^2) m`` or nothing is
    left to peel.
    """
    if not is_c4_free(g):
        raise NotC4Free("right containers need a C4-free graph")
    if not 0 < epsilon < 1:
        raise InvalidParameter(f"epsilon must lie in (0, 1), got {epsilon}")
    ordering = min_degree_ordering(g, tiebreak)
    rank = _rank(tiebreak, g.n)
    n = g.n
    entries = []
    for i in audited_positions(n, epsilon):
        m = n - i
        v = ordering.order[i]
        gi = ordering.suffix_mask(i)
        rest = ordering.suffix_mask(i + 1)
        nbhd = g.adj[v] & rest
        d = nbhd.bit_count()
        bound = (1 + epsilon ** 2) * m

        def measure(mask):
            return sum((g.adj[u] & gi).bit_count() for u in bits(mask))

        if shortcut_applies(d, m):
            cmask, T = nbhd, ()
            short = True
        else:
            sq = proper_square(g.induced(rest))
            size = stop_preset(stop_rule, m)

            def stop(T, A):
                return A.bit_count() <= size and measure(A | mask_of(T)) <= bound

            T, A, _ = peel(sq, rest, lambda u: bool(nbhd >> u & 1), rank, stop)
            cmask = A | mask_of(T)
            short = False
        entries.append(RightContainer(
            position=i, vertex=v, m=m, right_degree=d,
            neighbourhood=tuple(bits(nbhd)), container=tuple(bits(cmask)), fingerprint=tuple(T),
            measure=measure(cmask), bound=bound, shortcut=short,
        ))
    return RightContainerSet(ordering, epsilon, entries)


# ---------------------------------------------------------------- classification

@dataclass
class ClassificationReport:
    epsilon: float
    c_star: float
    win: list
    win_by_degree: list
    win_by_container: list
    large: list
    huge: list
    alive: dict
    alive_counts: dict
    fewlarge_violations: list
    otherfewlarge_violations: list
    nesting_applicable: bool
    huge_in_large: bool
    large_in_alive1: bool

    @property
    def alive_audit_ok(self):
        return not self.fewlarge_violations and not self.otherfewlarge_violations


def classify_vertices(g, ordering, rc, epsilon, positions=None):
    """Win / large / huge / i-alive classes and the alive-count audit of each container.

    Positions are 0-based; the 1-based index of position ``i`` is ``i + 1``
    and ``m = n - i``.  The container test of the win rule only applies at
    positions that have a container.
    """
    if len(ordering.order) != g.n:
        raise InvalidParameter("ordering and graph disagree on n")
    cs = gamma_and_cstar().c_star
    n = g.n
    sqrt_n = math.sqrt(n)
    containers = rc.by_position()
    degs = g.degrees()

    win, by_deg, by_cont = [], [], []
    for i, v in enumerate(ordering.order):
        m = n - i
        d = ordering.right_degrees[i]
        deg_rule = abs(d - cs * math.sqrt(m)) > epsilon * math.sqrt(m)
        cont_rule = i in containers and len(containers[i].container) <= (1 - epsilon ** 2) * math.sqrt(m) / cs
        if deg_rule:
            by_deg.append(v)
        if cont_rule:
            by_cont.append(v)
        if deg_rule or cont_rule:
            win.append(v)

    large = [v for v in range(n) if degs[v] > (1 + 30 * math.sqrt(epsilon)) * cs * sqrt_n]
    huge = [v for v in range(n) if degs[v] > sqrt_n]

    if positions is None:
        positions = sorted(set(containers) | {0})
    alive = {}
    for i in positions:
        m = n - i
        gi = ordering.suffix_mask(i)
        thresh = (1 + 10 * math.sqrt(epsilon)) * cs * math.sqrt(m)
        alive[i] = [u for u in ordering.order[i + 1:] if (g.adj[u] & gi).bit_count() > thresh]

    win_set = set(win)
    counts, few, other = {}, [], []
    for i, entry in containers.items():
        if i not in alive:
            m = n - i
            gi = ordering.suffix_mask(i)
            thresh = (1 + 10 * math.sqrt(epsilon)) * cs * math.sqrt(m)
            alive[i] = [u for u in ordering.order[i + 1:] if (g.adj[u] & gi).bit_count() > thresh]
        k = len(set(entry.container) & set(alive[i]))
        counts[i] = k
        m = n - i
        if entry.vertex not in win_set and i + 1 < (1 - epsilon) * n and k > math.sqrt(epsilon * m):
            few.append(i)
        if k > 10 * sqrt_n:
            other.append(i)

    first_alive = set(alive.get(0, []))
    return ClassificationReport(
        epsilon=epsilon,
        c_star=cs,
        win=win,
        win_by_degree=by_deg,
        win_by_container=by_cont,
        large=large,
        huge=huge,
        alive=alive,
        alive_counts=counts,
        fewlarge_violations=few,
        otherfewlarge_violations=other,
        nesting_applicable=(1 + 30 * math.sqrt(epsilon)) * cs <= 1,
        huge_in_large=set(huge) <= set(large),
        large_in_alive1=set(large) - {ordering.order[0]} <= first_alive,
    )


# ---------------------------------------------------------------- cherry and size audits

def degree_hypothesis(g, xmask, b):
    """Every vertex of X has degree above ``(1 - b) sqrt(n)`` and ``|X| >= n/2``."""
    thresh = (1 - b) * math.sqrt(g.n)
    return xmask.bit_count() >= g.n / 2 and all(g.degree(v) > thresh for v in bits(xmask))


def square_edges_inside(g, zmask):
    return proper_square(g).edges_inside(zmask)


def hole_audit(g, zmask, b):
    """``e(G^2[Z])`` against ``b n`` for ``|Z| = (1 + 3b) sqrt(n)``."""
    lhs = square_edges_inside(g, zmask)
    rhs = b * g.n
    return {"lhs": lhs, "rhs": rhs, "ok": lhs > rhs, "size": zmask.bit_count(),
            "target_size": (1 + 3 * b) * math.sqrt(g.n)}


def bighole_audit(g, zmask):
    """``e(G^2[Z])`` against ``C^2 n / 8`` where ``|Z| = C sqrt(n)``."""
    lhs = square_edges_inside(g, zmask)
    C = zmask.bit_count() / math.sqrt(g.n)
    rhs = C * C * g.n / 8
    return {"lhs": lhs, "rhs": rhs, "ok": lhs > rhs, "C": C}


def container_size_audit(family_or_containers, n, b):
    """Each container against ``(1 + 4b) sqrt(n)``; returns (sizes, bound, all_ok)."""
    cs = family_or_containers.containers if isinstance(family_or_containers, ContainerFamily) else family_or_containers
    sizes = [len(c) for c in cs]
    bound = (1 + 4 * b) * math.sqrt(n)
    return sizes, bound, all(s <= bound for s in sizes)

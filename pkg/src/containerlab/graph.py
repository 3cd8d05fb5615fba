"""Dense small graphs on bit-parallel adjacency rows.

Vertices are ``0..n-1``; row ``adj[v]`` is a Python int whose bit ``u`` is set
iff ``uv`` is an edge.  Graph values are immutable and hashable, so they can be
shared freely between workers.
"""

from __future__ import annotations

import hashlib
import itertools
import math
from dataclasses import dataclass

from . import caps
from .errors import InvalidParameter, NotC4Free, TooLarge, UnsupportedFieldOrder
from .parallel import rng


def bits(mask):
    """Yield the set bits of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(vertices):
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


@dataclass(frozen=True)
class Graph:
    n: int
    adj: tuple

    def __post_init__(self):
        if not 0 <= self.n <= caps.get("graph_n"):
            raise TooLarge(f"graph on {self.n} vertices exceeds the cap of {caps.get('graph_n')}")
        if len(self.adj) != self.n:
            raise InvalidParameter("adjacency must have one row per vertex")
        for v, row in enumerate(self.adj):
            if row >> self.n:
                raise InvalidParameter(f"row {v} references a vertex outside [n]")
            if row >> v & 1:
                raise InvalidParameter(f"self-loop at {v}")
            for u in bits(row):
                if not self.adj[u] >> v & 1:
                    raise InvalidParameter(f"adjacency not symmetric at {u},{v}")

    @classmethod
    def from_edges(cls, n, edges):
        rows = [0] * n
        for u, v in edges:
            if u == v:
                raise InvalidParameter(f"self-loop at {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise InvalidParameter(f"edge {u}-{v} outside [0, {n})")
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        return cls(n, tuple(rows))

    @classmethod
    def empty(cls, n):
        return cls(n, (0,) * n)

    @property
    def vertex_mask(self):
        return (1 << self.n) - 1

    def edges(self):
        """Edges ``(u, v)`` with ``u < v`` in lexicographic order."""
        return [(u, v) for u in range(self.n) for v in bits(self.adj[u] >> (u + 1) << (u + 1))]

    @property
    def e(self):
        return sum(r.bit_count() for r in self.adj) // 2

    def degree(self, v, within=None):
        row = self.adj[v]
        if within is not None:
            row &= within
        return row.bit_count()

    def degrees(self):
        return [r.bit_count() for r in self.adj]

    def has_edge(self, u, v):
        return bool(self.adj[u] >> v & 1)

    def neighbors(self, v):
        return list(bits(self.adj[v]))

    def induced(self, vertices):
        """Same vertex labels, keeping only edges inside ``vertices`` (mask or iterable)."""
        m = vertices if isinstance(vertices, int) else mask_of(vertices)
        return Graph(self.n, tuple((row & m) if (m >> v & 1) else 0 for v, row in enumerate(self.adj)))

    def edges_between(self, xs, ys):
        """Number of edges with one end in mask ``xs`` and the other in mask ``ys`` (disjoint)."""
        return sum((self.adj[v] & ys).bit_count() for v in bits(xs))

    def edges_inside(self, mask):
        return sum((self.adj[v] & mask).bit_count() for v in bits(mask)) // 2

    def with_edge_toggled(self, u, v):
        rows = list(self.adj)
        rows[u] ^= 1 << v
        rows[v] ^= 1 << u
        return Graph(self.n, tuple(rows))

    def is_subgraph_of(self, other):
        return self.n == other.n and all(a & ~b == 0 for a, b in zip(self.adj, other.adj))

    # serialization: "n=<int>" then "u v" per edge, lexicographic
    def dumps(self):
        lines = [f"n={self.n}"]
        lines.extend(f"{u} {v}" for u, v in self.edges())
        return "\n".join(lines) + "\n"

    @classmethod
    def loads(cls, text):
        lines = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
        if not lines or not lines[0].startswith("n="):
            raise InvalidParameter("graph text must start with 'n=<int>'")
        n = int(lines[0][2:])
        edges = []
        for ln in lines[1:]:
            u, v = (int(x) for x in ln.split())
            edges.append((u, v))
        return cls.from_edges(n, edges)

    def digest(self):
        return hashlib.sha256(self.dumps().encode()).hexdigest()[:16]


# ---------------------------------------------------------------- families

def path_graph(n):
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n):
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def complete_graph(n):
    return Graph.from_edges(n, itertools.combinations(range(n), 2))


def star_graph(leaves):
    return Graph.from_edges(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def petersen_graph():
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph.from_edges(10, outer + spokes + inner)


def random_graph(n, p, seed):
    """G(n, p): each pair ``u < v`` (lexicographic) kept iff its uniform draw is ``< p``."""
    if not 0 <= p <= 1:
        raise InvalidParameter(f"p must lie in [0, 1], got {p}")
    pairs = list(itertools.combinations(range(n), 2))
    draws = rng(seed).random(len(pairs))
    return Graph.from_edges(n, [pr for pr, x in zip(pairs, draws) if x < p])


def random_bipartite_graph(a, b, p, seed):
    """Random bipartite graph with classes ``0..a-1`` and ``a..a+b-1``."""
    pairs = [(u, a + w) for u in range(a) for w in range(b)]
    draws = rng(seed).random(len(pairs))
    return Graph.from_edges(a + b, [pr for pr, x in zip(pairs, draws) if x < p])


# ---------------------------------------------------------------- primitives

def proper_square(g):
    """``xy`` is an edge iff ``x`` and ``y`` have a common neighbour in ``g``."""
    rows = [0] * g.n
    for z in range(g.n):
        nz = g.adj[z]
        for x in bits(nz):
            rows[x] |= nz
    return Graph(g.n, tuple(r & ~(1 << v) for v, r in enumerate(rows)))


@dataclass(frozen=True)
class VertexOrdering:
    order: tuple
    right_degrees: tuple

    def position(self):
        pos = [0] * len(self.order)
        for i, v in enumerate(self.order):
            pos[v] = i
        return pos

    def suffix_mask(self, i):
        """Mask of ``order[i:]``."""
        return mask_of(self.order[i:])


def _rank(tiebreak, n):
    if tiebreak is None:
        return list(range(n))
    tiebreak = list(tiebreak)
    if sorted(tiebreak) != list(range(n)):
        raise InvalidParameter("tiebreak must be a permutation of range(n)")
    rank = [0] * n
    for i, v in enumerate(tiebreak):
        rank[v] = i
    return rank


def min_degree_ordering(g, tiebreak=None):
    """Repeatedly take a minimum-degree vertex of the residual graph.

    Ties go to the vertex listed first in ``tiebreak`` (identity by default).
    ``right_degrees[i]`` is the degree of ``order[i]`` in ``g[order[i:]]``.
    """
    rank = _rank(tiebreak, g.n)
    alive = g.vertex_mask
    order, right = [], []
    for _ in range(g.n):
        best = None
        for v in bits(alive):
            key = ((g.adj[v] & alive).bit_count(), rank[v])
            if best is None or key < best[0]:
                best = (key, v)
        (d, _), v = best
        order.append(v)
        right.append(d)
        alive &= ~(1 << v)
    return VertexOrdering(tuple(order), tuple(right))


def is_c4_free(g):
    """No two vertices share two or more neighbours."""
    adj = g.adj
    for u in range(g.n):
        au = adj[u]
        for v in range(u + 1, g.n):
            if (au & adj[v]).bit_count() >= 2:
                return False
    return True


def has_c4_subgraph(g):
    """Brute-force C4 search over ordered 4-tuples; slow reference checker."""
    for quad in itertools.combinations(range(g.n), 4):
        a, b, c, d = quad
        for x, y, z, w in ((a, b, c, d), (a, b, d, c), (a, c, b, d)):
            if g.has_edge(x, y) and g.has_edge(y, z) and g.has_edge(z, w) and g.has_edge(w, x):
                return True
    return False


def furedi_audit(g):
    """``(e(G^2), e(G) - floor(n/2), holds)``; the inequality holds for every graph."""
    lhs = proper_square(g).e
    rhs = g.e - g.n // 2
    return lhs, rhs, lhs >= rhs


def cherry_count(g):
    """Number of paths of length two, ``sum_v C(d(v), 2)``."""
    return sum(math.comb(d, 2) for d in g.degrees())


def degree_square_audit(g):
    """Returns ``(sum d_i^2, n^2 + 2 n^1.5, holds)`` for a C4-free graph."""
    if not is_c4_free(g):
        raise NotC4Free("degree-square audit needs a C4-free graph")
    total = sum(d * d for d in g.degrees())
    bound = g.n ** 2 + 2 * g.n ** 1.5
    return total, bound, total <= bound


def c4_free_edge_bound(n):
    return 0.5 * n ** 1.5 + n


def bipartite_c4_free_bound(a, b):
    a, b = min(a, b), max(a, b)
    return a * math.sqrt(b) + 2 * b


@dataclass(frozen=True)
class BipartitionSplit:
    Y: int
    X: int
    e_XY: int
    e_X: int
    e_Y: int

    @property
    def delta(self):
        n = (self.X | self.Y).bit_count()
        return self.Y.bit_count() / n if n else 0.0


def split_by_prefix(g, ordering, size):
    """Y = first ``size`` vertices of the ordering, X = the rest."""
    ymask = mask_of(ordering.order[:size])
    xmask = g.vertex_mask & ~ymask
    return BipartitionSplit(ymask, xmask, g.edges_between(ymask, xmask), g.edges_inside(xmask), g.edges_inside(ymask))


# ---------------------------------------------------------------- exact maximum C4-free subgraph

def _addable(rows, u, v):
    """Can ``uv`` join the C4-free graph ``rows`` without creating a C4?"""
    # a C4 through the new edge is u-x-w-v with x in N(u), w in N(v), x ~ w
    ru = rows[u]
    for w in bits(rows[v]):
        if rows[w] & ru:
            return False
    return True


def host_c4s(g):
    """Every 4-cycle of ``g`` as a tuple of four edges ``(u, v)`` with ``u < v``."""
    out = []
    adj = g.adj
    for a in range(g.n):
        # a is the smallest vertex of the cycle a-b-c-d-a, and b < d fixes the direction
        higher = ~((1 << (a + 1)) - 1)
        nb = adj[a] & higher
        for b in bits(nb):
            for d in bits(nb & ~((1 << (b + 1)) - 1)):
                for c in bits(adj[b] & adj[d] & higher & ~(1 << a)):
                    out.append(tuple(tuple(sorted(e)) for e in ((a, b), (b, c), (c, d), (d, a))))
    return out


def greedy_c4_free_subgraph(g, order=None):
    """Insert edges in ``order`` (lexicographic by default), skipping any that would close a C4."""
    rows = [0] * g.n
    kept = []
    for u, v in (g.edges() if order is None else order):
        if _addable(rows, u, v):
            rows[u] |= 1 << v
            rows[v] |= 1 << u
            kept.append((u, v))
    return kept


def max_c4_free_subgraph_exact(g, cap=None):
    """Maximum C4-free edge subset of ``g`` by branch and bound.

    Works as a minimum hitting set: every host 4-cycle must lose an edge.  The
    search branches on a live cycle with the fewest undecided edges (delete
    edge j, keep edges before j), and prunes with a greedy packing of live
    cycles that are pairwise disjoint on their undecided edges.  Edges are
    indexed by descending 4-cycle participation so the busiest ones are tried
    first.
    """
    cap = caps.get("exact_c4_n") if cap is None else cap
    if g.n > cap:
        raise TooLarge(f"exact search is capped at n={cap}, got n={g.n}")
    cycles = host_c4s(g)
    edges = g.edges()
    load = {e: 0 for e in edges}
    for cyc in cycles:
        for e in cyc:
            load[e] += 1
    edges.sort(key=lambda e: (-load[e], e))
    index = {e: i for i, e in enumerate(edges)}
    masks = sorted({sum(1 << index[e] for e in cyc) for cyc in cycles})

    warm = greedy_c4_free_subgraph(g, edges)
    best = [len(edges) - len(warm), mask_of(index[e] for e in edges if e not in set(warm))]

    def search(live, deleted, kept, ndel):
        if not live:
            if ndel < best[0]:
                best[0], best[1] = ndel, deleted
            return
        undecided = ~(deleted | kept)
        used = 0
        lower = 0
        pick = None
        for m in sorted(live, key=lambda m: (m & undecided).bit_count()):
            free = m & undecided
            if pick is None:
                pick = free
            if not free & used:
                used |= free
                lower += 1
        if ndel + lower >= best[0]:
            return
        # pick has at least one undecided edge: a fully kept live cycle is filtered out below
        fixed = 0
        for j in bits(pick):
            bit = 1 << j
            nd = deleted | bit
            nk = kept | fixed
            rest = []
            ok = True
            for m in live:
                if m & nd:
                    continue
                if m & ~nk == 0:
                    ok = False
                    break
                rest.append(m)
            if ok:
                search(rest, nd, nk, ndel + 1)
            fixed |= bit

    search(masks, 0, 0, 0)
    result = sorted(e for i, e in enumerate(edges) if not best[1] >> i & 1)
    return result, len(result)


# ---------------------------------------------------------------- polarity graphs

# irreducible polynomials (coefficients low -> high, monic) for the non-prime orders
_FIELD_POLY = {4: (2, (1, 1, 1)), 8: (2, (1, 1, 0, 1)), 9: (3, (1, 0, 1))}
SUPPORTED_Q = (2, 3, 4, 5, 7, 8, 9)


def field_tables(q):
    """Addition and multiplication tables of GF(q) for the supported orders."""
    if q not in SUPPORTED_Q:
        raise UnsupportedFieldOrder(f"q={q} not in {SUPPORTED_Q}")
    if q in (2, 3, 5, 7):
        add = [[(a + b) % q for b in range(q)] for a in range(q)]
        mul = [[(a * b) % q for b in range(q)] for a in range(q)]
        return add, mul
    p, poly = _FIELD_POLY[q]
    k = len(poly) - 1

    def digits(x):
        return [(x // p ** i) % p for i in range(k)]

    def number(ds):
        return sum(d * p ** i for i, d in enumerate(ds))

    def polymul(a, b):
        prod = [0] * (2 * k - 1)
        for i, x in enumerate(digits(a)):
            for j, y in enumerate(digits(b)):
                prod[i + j] = (prod[i + j] + x * y) % p
        for deg in range(2 * k - 2, k - 1, -1):
            c = prod[deg]
            if c:
                for i, pc in enumerate(poly):
                    prod[deg - k + i] = (prod[deg - k + i] - c * pc) % p
        return number(prod[:k])

    add = [[number([(x + y) % p for x, y in zip(digits(a), digits(b))]) for b in range(q)] for a in range(q)]
    mul = [[polymul(a, b) for b in range(q)] for a in range(q)]
    return add, mul


def projective_points(q):
    """Points of PG(2, q) as normalised triples (first non-zero coordinate is 1)."""
    pts = []
    for x in range(q):
        for y in range(q):
            pts.append((1, x, y))
    for y in range(q):
        pts.append((0, 1, y))
    pts.append((0, 0, 1))
    return pts


def polarity_graph(q):
    """Erdős–Rényi orthogonal polarity graph on PG(2, q) with loops dropped."""
    add, mul = field_tables(q)
    pts = projective_points(q)

    def dot(a, b):
        s = 0
        for x, y in zip(a, b):
            s = add[s][mul[x][y]]
        return s

    edges = [(i, j) for i, j in itertools.combinations(range(len(pts)), 2) if dot(pts[i], pts[j]) == 0]
    return Graph.from_edges(len(pts), edges)

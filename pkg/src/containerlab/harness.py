"""Run configurations, operation dispatch and report assembly."""

from __future__ import annotations

import csv
import io
import json
import logging
import math
import os
import time
from dataclasses import asdict, dataclass, field, is_dataclass
from fractions import Fraction

from . import __version__, acceptance, c4, caps, containers, graph, hypergraph, metric
from .checks import Check, _plain
from .constants import C_CERTIFICATE, C_HALF, gamma_and_cstar, kw_profile, slope_sign_changes
from .errors import InvalidConfig, LabError

log = logging.getLogger(__name__)

FORMATS = ("json", "csv")


@dataclass
class RunConfig:
    command: str
    action: str
    params: dict = field(default_factory=dict)
    seed: int = 0
    workers: int = 1
    format: str = "json"
    out: str | None = None
    cap: dict = field(default_factory=dict)

    def to_dict(self):
        return asdict(self)

    @classmethod
    def from_dict(cls, data):
        known = {f for f in cls.__dataclass_fields__}
        extra = set(data) - known
        if extra:
            raise InvalidConfig(f"unknown config keys {sorted(extra)}")
        data = dict(data)
        if isinstance(data.get("seed"), str):
            # large seeds are written as strings to survive JSON readers
            data["seed"] = int(data["seed"])
        try:
            return cls(**data)
        except TypeError as exc:
            raise InvalidConfig(str(exc)) from exc

    def validate(self):
        if (self.command, self.action) not in OPERATIONS:
            raise InvalidConfig(f"unknown operation {self.command} {self.action}")
        if self.format not in FORMATS:
            raise InvalidConfig(f"format must be one of {FORMATS}")
        if not isinstance(self.seed, int) or not 0 <= self.seed < 2 ** 64:
            raise InvalidConfig("seed must be a 64-bit unsigned integer")
        if not isinstance(self.workers, int) or self.workers < 1:
            raise InvalidConfig("workers must be a positive integer")
        spec = OPERATIONS[(self.command, self.action)][1]
        unknown = set(self.params) - {p.name for p in spec}
        if unknown:
            raise InvalidConfig(f"unknown parameters {sorted(unknown)} for {self.command} {self.action}")
        for p in spec:
            if p.name in self.params and self.params[p.name] is not None:
                try:
                    self.params[p.name] = p.type(self.params[p.name])
                except (TypeError, ValueError) as exc:
                    raise InvalidConfig(f"parameter {p.name}: {exc}") from exc
            else:
                self.params[p.name] = p.default
        return self


@dataclass(frozen=True)
class Param:
    name: str
    type: object
    default: object = None
    help: str = ""


def _bool(x):
    if isinstance(x, bool):
        return x
    if str(x).lower() in ("1", "true", "yes", "on"):
        return True
    if str(x).lower() in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {x!r}")


def _ints(x):
    if isinstance(x, (list, tuple)):
        return [int(v) for v in x]
    text = str(x).strip()
    return [int(v) for v in text.split(",")] if text else []


def _floats(x):
    if isinstance(x, (list, tuple)):
        return [float(v) for v in x]
    return [float(v) for v in str(x).split(",") if v.strip()]


# ---------------------------------------------------------------- graph specs

def parse_graph(spec, seed=0):
    """Build a graph from ``name[:args]`` or read it from a file in edge-list form."""
    if os.path.exists(spec):
        with open(spec) as fh:
            return graph.Graph.loads(fh.read())
    name, *args = spec.split(":")
    try:
        if name == "cycle":
            return graph.cycle_graph(int(args[0]))
        if name == "path":
            return graph.path_graph(int(args[0]))
        if name == "complete":
            return graph.complete_graph(int(args[0]))
        if name == "star":
            return graph.star_graph(int(args[0]))
        if name == "empty":
            return graph.Graph.empty(int(args[0]))
        if name == "petersen":
            return graph.petersen_graph()
        if name == "polarity":
            return graph.polarity_graph(int(args[0]))
        if name == "random":
            return graph.random_graph(int(args[0]), float(args[1]), seed)
    except (IndexError, ValueError) as exc:
        raise InvalidConfig(f"bad graph spec {spec!r}: {exc}") from exc
    raise InvalidConfig(f"unknown graph spec {spec!r}")


def _graph_out(g):
    return {"n": g.n, "e": g.e, "edges": [list(e) for e in g.edges()], "digest": g.digest()}


# ---------------------------------------------------------------- operations
# each returns (outputs, checks, references)

def _ref(name, value, tag):
    return {"name": name, "value": value, "tag": tag}


def op_metric_count(p, cfg):
    n, r = p["n"], p["r"]
    out = {"n": n, "r": r, "lower_bound": metric.m_of_r(r) ** math.comb(n, 2)}
    checks = []
    if p["method"] in ("brute", "both"):
        out["brute_force"] = metric.brute_force_count(n, r, workers=cfg.workers)
        checks.append(Check("count >= m(r)^C(n,2)", out["brute_force"], out["lower_bound"], ">="))
    if p["method"] in ("hypergraph", "both"):
        out["via_hypergraph"] = metric.count_via_hypergraph(n, r)
    if p["method"] == "both":
        checks.append(Check("hypergraph count = brute-force count", out["via_hypergraph"], out["brute_force"], "=="))
    out["count"] = out.get("brute_force", out.get("via_hypergraph"))
    return out, checks, []


def op_metric_stats(p, cfg):
    n, r = p["n"], p["r"]
    h, layout = metric.build_metric_hypergraph(n, r)
    st = hypergraph.degree_stats(h)
    out = {"n": n, "r": r, "vertices": h.N, "edges": len(h.edges), "delta1": st.delta1, "delta2": st.delta2,
           "delta3": st.delta3, "dbar": float(st.dbar)}
    checks = [
        Check("edges = 3 C(n,3) C(r,3)", len(h.edges), metric.metric_edge_count(n, r), "==", tag="oracle"),
        Check("Delta1 <= n r^2", st.delta1, n * r * r, "<=", tag="literature"),
        Check("Delta2 <= r", st.delta2, r, "<=", tag="literature"),
        Check("Delta3 <= 1", st.delta3, 1, "<=", tag="literature"),
        Check("dbar >= r^2 n / 64", float(st.dbar), r * r * n / 64, ">=", asserted=False, tag="literature"),
    ]
    if p["p"] is not None and p["alpha"] is not None and st.dbar > 0:
        hyp = hypergraph.hypotheses_from_stats(st, h.N, Fraction(p["p"]), Fraction(p["alpha"]), p["c"])
        out["delta_hp"] = float(hyp.delta_hp)
        out["container_log_bound"] = hyp.container_log_bound
        checks += [
            Check("p <= 1/(3^6 c)", float(hyp.p), 1 / (3 ** 6 * p["c"]), "<=", asserted=False),
            Check("Delta(H,p) <= alpha/(27 c)", float(hyp.delta_hp), float(hyp.alpha) / (27 * p["c"]), "<=",
                  asserted=False),
        ]
    return out, checks, []


def op_metric_local(p, cfg):
    r = p["r"]
    if p["scan"]:
        free, bad = metric.local_criterion_scan(r)
        return ({"r": r, "violation_free_triples": free, "counterexamples": len(bad)},
                [Check("violation-free triples over the size bound", len(bad), 0, "==")], [])
    free, ok = metric.local_criterion_check(p["A"], p["B"], p["C"], r)
    size = len(set(p["A"])) + len(set(p["B"])) + len(set(p["C"]))
    bound = 3 * metric.m_of_r(r) + r % 2
    return ({"r": r, "violation_free": free, "bound_ok": ok, "size": size, "bound": bound},
            [Check("size bound when violation-free", ok, True, "==")], [])


def op_metric_supersat(p, cfg):
    n, r = p["n"], p["r"]
    h, layout = metric.build_metric_hypergraph(n, r)
    S = range(h.N) if p["S"] == "all" else _ints(p["S"])
    res = metric.supersaturation_audit(n, r, p["epsilon"], S, p["assert_from_n"], hypergraph=(h, layout))
    out = asdict(res)
    return out, [Check("edges inside S >= required", res.edge_count, res.required, ">=", asserted=res.asserted,
                       tag="literature")], []


def op_metric_polytope(p, cfg):
    est = metric.polytope_volume_mc(p["n"], p["samples"], cfg.seed, workers=cfg.workers, low=p["low"],
                                    delta=p["delta"])
    out = asdict(est)
    out["interval"] = list(est.interval)
    checks = [
        Check("estimate <= 1/2 + n^-(1/6 - delta)", est.estimate, est.bound, "<=", asserted=False,
              tag="literature"),
        Check("estimate vs 1/2 limit", est.estimate, 0.5, ">=", asserted=False, tag="literature"),
    ]
    if p["n"] == 3 and not p["low"]:
        sigma = math.sqrt(0.25 / est.samples)
        checks.append(Check("|rate - 1/2| / sigma <= 4", abs(est.rate - 0.5) / sigma, 4.0, "<=", tag="oracle"))
    return out, checks, [_ref("acceptance rate at n=3", 0.5, "oracle")]


def op_metric_params(p, cfg):
    if p["mode"] == "continuous":
        ch = metric.continuous_bound_chain(p["n"], p["delta"], p["c"])
        out = {"n": ch.n, "delta": ch.delta, "r": ch.r, "p": ch.p, "alpha": ch.alpha, "final_bound": ch.final_bound,
               "vertex_factor": ch.vertex_factor}
        return out, ch.checks, []
    w = metric.wojtek_parameters(int(p["n"]), p["r"], p["delta"], p["c"])
    out = {"n": w.n, "r": w.r, "delta": w.delta, "c": w.c, "p": w.p, "alpha": w.alpha, "exact_stats": w.exact_stats,
           "stats": w.stats, "first_n_holding": w.thresholds, "log": "natural"}
    return out, w.checks, []


def op_metric_maxind(p, cfg):
    res = metric.max_independent_audit(p["n"], p["r"], mode=p["mode"], seed=cfg.seed)
    out = asdict(res)
    out["witness"] = list(res.witness)
    checks = [
        Check("max independent size <= bound", res.max_size, res.bound, "<=", tag="literature"),
        Check("max independent size <= conjectured odd bound", res.max_size, res.conjectured_odd_bound, "<=",
              asserted=False, tag="literature"),
    ]
    return out, checks, []


def _square_for(p, cfg):
    g = parse_graph(p["graph"], cfg.seed)
    return (graph.proper_square(g) if p["square"] else g), g


def op_containers_build(p, cfg):
    sq, _ = _square_for(p, cfg)
    tb = p["tiebreak"] or None
    fp, c = containers.kw_container(sq, p["I"], tb, p["stop_size"])
    again = containers.container_for_fingerprint(sq, fp, tb, p["stop_size"])
    out = {"T": list(fp.vertices), "C": list(c.vertices), "removals": list(c.removals)}
    checks = [
        Check("T subset of I", set(fp.vertices) <= set(p["I"]), True, "=="),
        Check("I subset of C", set(p["I"]) <= set(c.vertices), True, "=="),
        Check("replay from T matches", again.vertices == c.vertices, True, "=="),
    ]
    return out, checks, []


def op_containers_enumerate(p, cfg):
    sq, _ = _square_for(p, cfg)
    fam = containers.enumerate_all_containers(sq, p["tiebreak"] or None, p["stop_size"], p["max_fingerprint"])
    out = {"count": len(fam), "family": fam.dumps(),
           "rows": [{"T": " ".join(map(str, fp.vertices)), "C": " ".join(map(str, c.vertices))}
                    for fp, c in fam.records.items()]}
    return out, [], []


def op_containers_coverage(p, cfg):
    sq, _ = _square_for(p, cfg)
    fam = containers.enumerate_all_containers(sq, p["tiebreak"] or None, p["stop_size"])
    sets = containers.independent_sets(sq)
    bad = containers.coverage_failures(fam, sets)
    out = {"containers": len(fam), "independent_sets": len(sets), "uncovered": len(bad)}
    return out, [Check("uncovered independent sets", len(bad), 0, "==")], []


def op_containers_right(p, cfg):
    g = parse_graph(p["graph"], cfg.seed)
    tb = p["tiebreak"] or None
    rc = containers.build_right_containers(g, p["epsilon"], tb, p["stop_rule"])
    rep = containers.classify_vertices(g, rc.ordering, rc, p["epsilon"])
    rows = [{"position": e.position, "vertex": e.vertex, "m": e.m, "right_degree": e.right_degree,
             "container_size": len(e.container), "measure": e.measure, "bound": e.bound, "ok": e.ok,
             "forced": e.container == e.neighbourhood} for e in rc.entries]
    forced = [e.position for e in rc.entries if not e.ok and e.container != e.neighbourhood]
    out = {"rows": rows, "win": rep.win, "large": rep.large, "huge": rep.huge,
           "alive_counts": {str(k): v for k, v in rep.alive_counts.items()},
           "nesting_applicable": rep.nesting_applicable, "huge_in_large": rep.huge_in_large,
           "large_in_alive1": rep.large_in_alive1}
    checks = [
        Check("measure above bound with a peelable container", len(forced), 0, "=="),
        Check("positions with measure above bound", len(rc.violations()), 0, "==", asserted=False),
        Check("large minus v1 inside 1-alive", rep.large_in_alive1, True, "=="),
        Check("huge inside large", rep.huge_in_large, True, "==", asserted=rep.nesting_applicable),
        Check("alive-count audit violations", len(rep.fewlarge_violations) + len(rep.otherfewlarge_violations), 0,
              "==", asserted=False),
    ]
    return out, checks, [_ref("c*", rep.c_star, "definition")]


def op_c4_count(p, cfg):
    n = p["n"]
    f = c4.count_c4_free_graphs(n)
    out = {"n": n, "count": f, "log2_count": math.log2(f), "bound": c4.kw_bound_value(max(n, 1), p["delta"])}
    checks = [Check("log2 F_n < (gamma - delta) n^(3/2)", out["log2_count"], out["bound"], "<", asserted=False)]
    if n <= 5:
        checks.append(Check("matches brute force", f, c4.count_c4_free_brute(n), "==", tag="oracle"))
    return out, checks, [_ref("gamma", gamma_and_cstar().gamma, "literature")]


def op_c4_random(p, cfg):
    res = c4.c4_random_experiment(p["n"], p["p"], p["trials"], cfg.seed, p["mode"], cfg.workers)
    checks = res.pop("checks")
    return res, checks, [_ref("c at p=1/2, second proof", C_HALF, "literature"),
                         _ref("c at p=1/2, certificate proof", C_CERTIFICATE, "literature")]


def op_c4_certificate(p, cfg):
    h = parse_graph(p["graph"], cfg.seed)
    host = parse_graph(p["host"], cfg.seed) if p["host"] else graph.complete_graph(h.n)
    cert = c4.build_certificate(host, h, p["delta"], p["epsilon"], p["t"], cfg.seed)
    fails = c4.certificate_failures(host, h, cert)
    return {"certificate": cert.to_dict(), "failures": fails}, [Check("verification failures", len(fails), 0, "==")], []


def op_c4_blowup(p, cfg):
    g0 = parse_graph(p["graph"], cfg.seed)
    b = c4.morris_saxton_blowup(g0, cfg.seed, p["full"])
    out = {"base": _graph_out(g0), "result": _graph_out(b.result), "matchings": [list(map(list, m)) for m in b.matchings]}
    return out, [Check("result is C4-free", graph.is_c4_free(b.result), True, "==")], []


def op_c4_overlap(p, cfg):
    grid = p["grid"] or [k / 20 for k in range(21)]
    values, p0 = c4.expected_overlap_curve(grid)
    out = {"p0": p0, "rows": [{"p": x, "gain": g} for x, g in values]}
    return out, [Check("p0 ~ 0.2", p0, 0.2, "~=", tol=0.05, tag="literature")], []


def op_c4_regular(p, cfg):
    thr, rows = c4.regular_threshold(p["n"], p["p"])
    return {"threshold": thr, "rows": rows}, [], []


def op_c4_excess(p, cfg):
    g = parse_graph(p["graph"], cfg.seed)
    ordering = graph.min_degree_ordering(g, p["tiebreak"] or None)
    rep = c4.excess_degree_report(g, ordering, p["p"])
    out = asdict(rep)
    out["I"] = list(rep.I)
    return out, [Check("D >= 0", rep.D, 0, ">=")], []


def op_graph_square(p, cfg):
    g = parse_graph(p["graph"], cfg.seed)
    sq = graph.proper_square(g)
    lhs, rhs, ok = graph.furedi_audit(g)
    out = {"graph": _graph_out(g), "square": _graph_out(sq), "text": sq.dumps()}
    return out, [Check("e(G^2) >= e(G) - floor(n/2)", lhs, rhs, ">=")], []


def op_graph_ordering(p, cfg):
    g = parse_graph(p["graph"], cfg.seed)
    o = graph.min_degree_ordering(g, p["tiebreak"] or None)
    out = {"order": list(o.order), "right_degrees": list(o.right_degrees)}
    return out, [Check("sum of right degrees = e(G)", sum(o.right_degrees), g.e, "==")], []


def op_graph_extremal(p, cfg):
    g = parse_graph(p["graph"], cfg.seed)
    edges, size = graph.max_c4_free_subgraph_exact(g)
    sub = graph.Graph.from_edges(g.n, edges)
    total, bound, _ = graph.degree_square_audit(sub)
    out = {"size": size, "edges": [list(e) for e in edges]}
    checks = [
        Check("e <= 0.5 n^(3/2) + n", size, graph.c4_free_edge_bound(g.n), "<=", tag="literature"),
        Check("sum d^2 <= n^2 + 2 n^(3/2)", total, bound, "<=", tag="literature"),
        Check("result is C4-free", graph.is_c4_free(sub), True, "=="),
    ]
    return out, checks, []


def op_graph_polarity(p, cfg):
    q = p["q"]
    g = graph.polarity_graph(q)
    out = _graph_out(g)
    out["text"] = g.dumps()
    checks = [
        Check("vertices = q^2 + q + 1", g.n, q * q + q + 1, "==", tag="definition"),
        Check("edges = q(q+1)^2/2", g.e, q * (q + 1) ** 2 // 2, "==", tag="definition"),
        Check("C4-free", graph.is_c4_free(g), True, "=="),
    ]
    return out, checks, []


def op_demo_kkfree(p, cfg):
    rep = c4.kkfree_demo(p["n"], p["k"])
    checks = [
        Check("log2 ratio > 1", rep.log2_ratio, 1, ">", asserted=False),
        Check("log2 ratio < 2.5", rep.log2_ratio, 2.5, "<", asserted=False),
    ]
    return asdict(rep), checks, []


def op_constants_gamma(p, cfg):
    rep = gamma_and_cstar()
    out = {"gamma": rep.gamma, "c_star": rep.c_star, "argmax_x": rep.argmax_x, "c_half": C_HALF,
           "c_certificate": C_CERTIFICATE}
    checks = [
        Check("profile slope sign changes", slope_sign_changes(kw_profile), 1, "=="),
        Check("gamma", rep.gamma, 1.081919, "~=", tol=1e-5, tag="literature"),
        Check("c*", rep.c_star, 0.49, "~=", tol=0.01, tag="literature"),
    ]
    return out, checks, [_ref("gamma", 1.081919, "literature"), _ref("c*", 0.49, "literature")]


def op_acceptance(p, cfg, suite):
    results = acceptance.run_suite(suite)
    checks = []
    for res in results:
        for c in res.checks:
            checks.append(Check(f"[{res.number}] {c.name}", c.lhs, c.rhs, c.relation, c.asserted, c.tol, c.tag, c.note))
        checks.append(Check(f"[{res.number}] runtime seconds", res.elapsed, res.limit, "<"))
    out = {"suite": suite, "criteria": [{"number": r.number, "title": r.title, "passed": r.passed,
                                         "elapsed": r.elapsed, "limit": r.limit} for r in results]}
    return out, checks, []


G = Param("graph", str, "cycle:5", "graph spec or edge-list file")
TB = Param("tiebreak", _ints, None, "comma-separated tiebreak permutation")

OPERATIONS = {
    ("metric", "count"): (op_metric_count, [Param("n", int, 3), Param("r", int, 3),
                                           Param("method", str, "both", "brute|hypergraph|both")]),
    ("metric", "hypergraph-stats"): (op_metric_stats, [Param("n", int, 4), Param("r", int, 3), Param("p", float),
                                                       Param("alpha", float), Param("c", int, 1)]),
    ("metric", "local-criterion"): (op_metric_local, [Param("A", _ints, [2]), Param("B", _ints, [2]),
                                                      Param("C", _ints, [2]), Param("r", int, 4),
                                                      Param("scan", _bool, False)]),
    ("metric", "supersaturation"): (op_metric_supersat, [Param("n", int, 6), Param("r", int, 3),
                                                         Param("epsilon", float, 0.5), Param("S", str, "all"),
                                                         Param("assert_from_n", int)]),
    ("metric", "polytope"): (op_metric_polytope, [Param("n", int, 3), Param("samples", int, 1_000_000),
                                                  Param("low", float, 0.0), Param("delta", float, 0.05)]),
    ("metric", "params"): (op_metric_params, [Param("n", float, 1000), Param("r", int, 5), Param("delta", float, 0.1),
                                              Param("c", int, 1), Param("mode", str, "discrete")]),
    ("metric", "max-independent"): (op_metric_maxind, [Param("n", int, 3), Param("r", int, 3),
                                                       Param("mode", str, "exact")]),
    ("containers", "build"): (op_containers_build, [G, Param("I", _ints, []), Param("stop_size", int, 0), TB,
                                                    Param("square", _bool, False)]),
    ("containers", "enumerate"): (op_containers_enumerate, [G, Param("stop_size", int, 0), TB,
                                                            Param("max_fingerprint", int),
                                                            Param("square", _bool, False)]),
    ("containers", "coverage"): (op_containers_coverage, [G, Param("stop_size", int, 0), TB,
                                                          Param("square", _bool, False)]),
    ("containers", "right"): (op_containers_right, [Param("graph", str, "polarity:5"), Param("epsilon", float, 0.2),
                                                    TB, Param("stop_rule", str, "3sqrt")]),
    ("c4", "count"): (op_c4_count, [Param("n", int, 5), Param("delta", float, 0.0)]),
    ("c4", "random"): (op_c4_random, [Param("n", int, 12), Param("p", float, 0.5), Param("trials", int, 10),
                                      Param("mode", str, "exact")]),
    ("c4", "certificate"): (op_c4_certificate, [Param("graph", str, "polarity:3"), Param("host", str),
                                                Param("delta", float, 0.3), Param("epsilon", float, 0.1),
                                                Param("t", float, 2.0)]),
    ("c4", "blowup"): (op_c4_blowup, [Param("graph", str, "polarity:3"), Param("full", _bool, False)]),
    ("c4", "overlap"): (op_c4_overlap, [Param("grid", _floats, None)]),
    ("c4", "regular"): (op_c4_regular, [Param("n", int, 16), Param("p", float, 0.5)]),
    ("c4", "excess"): (op_c4_excess, [Param("graph", str, "polarity:3"), Param("p", float, 0.5), TB]),
    ("graph", "square"): (op_graph_square, [G]),
    ("graph", "ordering"): (op_graph_ordering, [G, TB]),
    ("graph", "extremal"): (op_graph_extremal, [Param("graph", str, "complete:7")]),
    ("graph", "polarity"): (op_graph_polarity, [Param("q", int, 3)]),
    ("demo", "kkfree"): (op_demo_kkfree, [Param("n", int, 5), Param("k", int, 3)]),
    ("constants", "gamma"): (op_constants_gamma, []),
    ("acceptance", "fast"): (lambda p, cfg: op_acceptance(p, cfg, "fast"), []),
    ("acceptance", "full"): (lambda p, cfg: op_acceptance(p, cfg, "full"), []),
}


def _jsonable(x):
    if is_dataclass(x) and not isinstance(x, type):
        return _jsonable(asdict(x))
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, set, frozenset)):
        items = sorted(x) if isinstance(x, (set, frozenset)) else x
        return [_jsonable(v) for v in items]
    return _plain(x)


def run(config):
    """Validate, dispatch and assemble the report; exit status is 0 iff every asserted check holds."""
    config.validate()
    unknown = set(config.cap) - set(caps.DEFAULTS)
    if unknown:
        raise InvalidConfig(f"unknown caps {sorted(unknown)}")
    previous = dict(caps._overrides)
    caps.set_overrides({**previous, **{k: int(v) for k, v in config.cap.items()}})
    fn, _ = OPERATIONS[(config.command, config.action)]
    log.info("running %s %s", config.command, config.action)
    start = time.perf_counter()
    try:
        outputs, checks, refs = fn(dict(config.params), config)
    except LabError as exc:
        raise type(exc)(f"{config.command} {config.action}: {exc}") from exc
    finally:
        caps.set_overrides(previous)
    wall = time.perf_counter() - start
    status = all(c.holds for c in checks if c.asserted)
    return {
        "tool": "containerlab",
        "version": __version__,
        "config": _jsonable(config.to_dict()),
        "wall_time": wall,
        "outputs": _jsonable(outputs),
        "checks": [c.to_dict() for c in checks],
        "references": _jsonable(refs),
        "ok": status,
    }


def exit_status(report):
    return 0 if report["ok"] else 1


def render(report, fmt="json"):
    if fmt == "json":
        return json.dumps(report, sort_keys=True, indent=2) + "\n"
    buf = io.StringIO()
    rows = report["outputs"].get("rows") if isinstance(report["outputs"], dict) else None
    if rows:
        fields = sorted({k for row in rows for k in row})
        w = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
        w.writeheader()
        for row in rows:
            w.writerow(row)
        buf.write("\n")
    fields = ["name", "relation", "lhs", "rhs", "asserted", "status", "tag"]
    w = csv.DictWriter(buf, fieldnames=fields, extrasaction="ignore", lineterminator="\n")
    w.writeheader()
    for c in report["checks"]:
        w.writerow(c)
    return buf.getvalue()

"""Network experiment simulation, visibility fitting and Table 1 reproduction."""

from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from importlib import resources

import numpy as np

from . import boxworld, network, oracle
from .chained import ChainedGameSpec, chained_bounds, chained_coefficients, chained_score, optimal_settings
from .network import NetworkGraph, named_graph
from .quantum import NoisyStateParams, Plane, noisy_state

REPORT_SCHEMA_VERSION = "1.0"
RATIO_TOL = 5e-5
SIGMA_TOL = 1.0


class ConfigError(ValueError):
    """Invalid experiment configuration; ``problems`` lists one message per field."""

    def __init__(self, problems: list[str]) -> None:
        self.problems = list(problems)
        super().__init__("invalid experiment config:\n  " + "\n  ".join(self.problems))


Edge = tuple[int, int]


def _edge(item) -> Edge:
    i, j = (int(x) for x in item)
    return (min(i, j), max(i, j))


@dataclass(frozen=True)
class ExperimentConfig:
    graph: NetworkGraph
    k: int
    states: dict[Edge, NoisyStateParams]
    angles: dict[Edge, ChainedGameSpec] = field(default_factory=dict)
    events_per_input: int = 0
    seed: int = 0
    plane: Plane = Plane.XZ
    graph_name: str | None = None

    def __post_init__(self) -> None:
        problems = []
        if self.k < 2:
            problems.append(f"k: must be >= 2, got {self.k}")
        missing = set(self.graph.edges) - set(self.states)
        extra = set(self.states) - set(self.graph.edges)
        for e in sorted(missing):
            problems.append(f"states: no entry for edge {list(e)}")
        for e in sorted(extra):
            problems.append(f"states: edge {list(e)} is not in the graph")
        for e, spec in self.angles.items():
            if e not in self.graph.edges:
                problems.append(f"angles: edge {list(e)} is not in the graph")
            elif spec.k != self.k:
                problems.append(f"angles: edge {list(e)} has k={spec.k}, expected {self.k}")
        if self.events_per_input < 0:
            problems.append(f"monte_carlo.events_per_input: must be >= 0, got {self.events_per_input}")
        if not 0 <= self.seed < 2**64:
            problems.append(f"monte_carlo.seed: must be a 64-bit unsigned integer, got {self.seed}")
        if problems:
            raise ConfigError(problems)

    @classmethod
    def homogeneous(
        cls, graph: NetworkGraph | str, k: int, v: float, lam: float = 0.0, **kwargs
    ) -> ExperimentConfig:
        name = graph if isinstance(graph, str) else None
        g = named_graph(graph) if isinstance(graph, str) else graph
        params = NoisyStateParams(v, lam)
        return cls(g, k, {e: params for e in g.edges}, graph_name=name, **kwargs)

    def spec_for(self, edge: Edge) -> ChainedGameSpec:
        return self.angles.get(edge) or optimal_settings(self.k, self.plane)

    @classmethod
    def from_dict(cls, data: dict) -> ExperimentConfig:
        problems = []
        graph, name = None, None
        raw_graph = data.get("graph")
        try:
            if isinstance(raw_graph, str):
                graph, name = named_graph(raw_graph), raw_graph
            elif isinstance(raw_graph, dict):
                graph = NetworkGraph.from_dict(raw_graph)
            else:
                problems.append("graph: expected a name or {nodes, edges} object")
        except (ValueError, KeyError, TypeError) as exc:
            problems.append(f"graph: {exc}")
        k = data.get("k")
        if not isinstance(k, int):
            problems.append(f"k: expected an integer, got {k!r}")
        states = {}
        for n, item in enumerate(data.get("states", [])):
            try:
                e = _edge(item["edge"])
                if e in states:
                    problems.append(f"states[{n}]: duplicate entry for edge {list(e)}")
                states[e] = NoisyStateParams.from_dict(item)
            except (ValueError, KeyError, TypeError) as exc:
                problems.append(f"states[{n}]: {exc}")
        if "states" not in data:
            problems.append("states: missing")
        plane = Plane.XZ
        try:
            plane = Plane(data.get("plane", "XZ"))
        except ValueError:
            problems.append(f"plane: expected 'XZ' or 'XY', got {data.get('plane')!r}")
        angles = {}
        for n, item in enumerate(data.get("angles", [])):
            try:
                angles[_edge(item["edge"])] = ChainedGameSpec.from_dict(item)
            except (ValueError, KeyError, TypeError) as exc:
                problems.append(f"angles[{n}]: {exc}")
        mc = data.get("monte_carlo", {})
        events = mc.get("events_per_input", 0)
        seed = mc.get("seed", 0)
        if not isinstance(events, int):
            problems.append(f"monte_carlo.events_per_input: expected an integer, got {events!r}")
        if not isinstance(seed, int):
            problems.append(f"monte_carlo.seed: expected an integer, got {seed!r}")
        if problems:
            raise ConfigError(problems)
        return cls(graph, k, states, angles, events, seed, plane, name)

    def to_dict(self) -> dict:
        return {
            "graph": self.graph_name or self.graph.to_dict(),
            "k": self.k,
            "plane": Plane(self.plane).value,
            "states": [{"edge": list(e), **self.states[e].to_dict()} for e in sorted(self.states)],
            "angles": [{"edge": list(e), **self.angles[e].to_dict()} for e in sorted(self.angles)],
            "monte_carlo": {"events_per_input": self.events_per_input, "seed": self.seed},
        }

    @classmethod
    def from_json(cls, text: str) -> ExperimentConfig:
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError([f"not valid JSON: {exc}"]) from exc
        return cls.from_dict(data)


@dataclass(frozen=True)
class EdgeResult:
    edge: Edge
    score: float
    stderr: float

    def to_dict(self) -> dict:
        return {"edge": list(self.edge), "score": self.score, "stderr": self.stderr}


@dataclass(frozen=True)
class RunReport:
    per_edge: tuple[EdgeResult, ...]
    total: float
    total_error: float
    bound: float
    k: int
    mode: str

    @property
    def ratio(self) -> float:
        return self.total / self.bound

    @property
    def sigma(self) -> float | None:
        return (self.total - self.bound) / self.total_error if self.total_error > 0 else None

    @property
    def witnessing(self) -> bool:
        return network.witnesses(self.total, self.bound)

    def to_dict(self) -> dict:
        return {
            "schema_version": REPORT_SCHEMA_VERSION,
            "mode": self.mode,
            "k": self.k,
            "per_edge": [r.to_dict() for r in self.per_edge],
            "total": self.total,
            "total_error": self.total_error,
            "bound": self.bound,
            "ratio": self.ratio,
            "sigma": self.sigma,
            "witnessing": self.witnessing,
        }

    @classmethod
    def from_dict(cls, data: dict) -> RunReport:
        if data.get("schema_version") != REPORT_SCHEMA_VERSION:
            raise ValueError(f"unsupported report schema version {data.get('schema_version')!r}")
        edges = tuple(EdgeResult(_edge(r["edge"]), r["score"], r["stderr"]) for r in data["per_edge"])
        return cls(edges, data["total"], data["total_error"], data["bound"], data["k"], data["mode"])


def _sample_task(args) -> tuple[float, float]:
    probs, n_events, seed_seq = args
    rng = np.random.Generator(np.random.PCG64(seed_seq))
    counts = rng.multinomial(n_events, probs.ravel())
    n00, n01, n10, n11 = counts
    e = (n00 + n11 - n01 - n10) / n_events
    # Poisson counting errors on same/different-parity counts reduce to (1 - E^2)/N
    var = 4.0 * (n00 + n11) * (n01 + n10) / n_events**3
    return float(e), float(var)


def sample_correlators(
    box: boxworld.Box,
    pairs: list[tuple[int, int]],
    n_events: int,
    seeds: list[np.random.SeedSequence],
    workers: int = 1,
) -> list[tuple[float, float]]:
    """Estimate ``<A_x B_y>`` and its variance from ``n_events`` trials per input pair."""
    tasks = [(box.table[:, :, x, y], n_events, s) for (x, y), s in zip(pairs, seeds)]
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_sample_task, tasks))
    return [_sample_task(t) for t in tasks]


def simulate(cfg: ExperimentConfig, workers: int = 1) -> RunReport:
    """Score every edge's chained game on its noisy source and compare with the foil bound.

    With ``events_per_input == 0`` the correlators are exact. Otherwise each
    measured input pair gets its own generator stream spawned from the master
    seed in a fixed order, so results do not depend on ``workers``.
    """
    edges = cfg.graph.sorted_edges()
    coeffs = chained_coefficients(cfg.k)
    pairs = [tuple(int(i) for i in p) for p in np.argwhere(coeffs != 0)]
    bound = network.svetlichny_bound(cfg.graph, chained_bounds(cfg.k))
    results = []
    if cfg.events_per_input == 0:
        for e in edges:
            s = chained_score(noisy_state(cfg.states[e]), cfg.spec_for(e))
            results.append(EdgeResult(e, s, 0.0))
        mode = "exact"
    else:
        children = np.random.SeedSequence(cfg.seed).spawn(len(edges) * len(pairs))
        for n, e in enumerate(edges):
            box = boxworld.box_from_quantum(noisy_state(cfg.states[e]), cfg.spec_for(e))
            seeds = children[n * len(pairs) : (n + 1) * len(pairs)]
            est = sample_correlators(box, pairs, cfg.events_per_input, seeds, workers)
            score = sum(coeffs[p] * m for p, (m, _) in zip(pairs, est))
            var = sum(coeffs[p] ** 2 * v for p, (_, v) in zip(pairs, est))
            results.append(EdgeResult(e, float(score), math.sqrt(var)))
        mode = "sampled"
    total = sum(r.score for r in results)
    total_error = math.sqrt(sum(r.stderr**2 for r in results))
    return RunReport(tuple(results), total, total_error, bound, cfg.k, mode)


def critical_homogeneous_visibility(graph: NetworkGraph | str, k: int, tol: float = 1e-9) -> float:
    """Bisect the homogeneous white-noise visibility at which exact simulation starts witnessing."""
    lo, hi = 0.0, 1.0
    if not simulate(ExperimentConfig.homogeneous(graph, k, hi)).witnessing:
        return math.inf
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if simulate(ExperimentConfig.homogeneous(graph, k, mid)).witnessing:
            hi = mid
        else:
            lo = mid
    return hi


# -- fitting ---------------------------------------------------------------------

CHSH_QUANTUM_MAX = 2 * math.sqrt(2)


@dataclass(frozen=True)
class FitResult:
    visibilities: dict[Edge, float]
    by_k: dict[int, RunReport]

    def to_dict(self) -> dict:
        return {
            "model": "white noise (lambda = 0)",
            "visibilities": [{"edge": list(e), "v": v} for e, v in sorted(self.visibilities.items())],
            "by_k": {str(k): r.to_dict() for k, r in self.by_k.items()},
        }


def fit_visibilities(
    scores: dict[Edge, float], graph: NetworkGraph | str = "triangle", ks=range(2, 6)
) -> FitResult:
    """White-noise visibilities from per-edge CHSH scores, re-scored with chained games."""
    g = named_graph(graph) if isinstance(graph, str) else graph
    vis = {}
    for e, s in scores.items():
        e = _edge(e)
        if abs(s) > CHSH_QUANTUM_MAX + 1e-12:
            raise ValueError(f"edge {list(e)}: CHSH score {s} outside the quantum range")
        # the white-noise model reaches only v in [0, 1]
        if s < 0:
            raise ValueError(f"edge {list(e)}: negative CHSH score {s} not fittable with lambda = 0")
        vis[e] = min(1.0, s / CHSH_QUANTUM_MAX)
    by_k = {}
    for k in ks:
        cfg = ExperimentConfig(g, k, {e: NoisyStateParams(v) for e, v in vis.items()})
        by_k[k] = simulate(cfg)
    return FitResult(vis, by_k)


# -- reproduction of the published table --------------------------------------------

def load_transcribed() -> dict:
    """Transcribed experimental values shipped with the package."""
    return json.loads(resources.files("netbell").joinpath("data/table1.json").read_text())


def headline_visibilities() -> dict[str, float]:
    tri, line = network.triangle(), network.line3()
    return {
        "triangle_chsh": network.critical_visibility(tri, chained_bounds(2)),
        "triangle_k3": network.critical_visibility(tri, chained_bounds(3)),
        "line_k5": network.critical_visibility(line, chained_bounds(5)),
        "line_chsh": network.critical_visibility(line, chained_bounds(2)),
    }


def reproduce(include_oracle: bool = True) -> dict:
    """Recompute the theory behind Table 1 and check the transcribed numbers for consistency."""
    data = load_transcribed()
    tri = network.triangle()
    rows, flags = [], []
    for row in data["rows"]:
        k = row["k"]
        bound = network.svetlichny_bound(tri, chained_bounds(k))
        ratio = row["svet"] / bound
        sigma = (row["svet"] - bound) / row["svet_err"]
        quoted_sigma = data["quoted_sigmas"].get(str(k))
        ratio_ok = abs(ratio - row["ratio"]) <= RATIO_TOL
        sigma_ok = quoted_sigma is None or abs(sigma - quoted_sigma) <= SIGMA_TOL
        if not ratio_ok:
            flags.append(
                f"k={k}: transcribed ratio {row['ratio']} vs recomputed {ratio:.6f} "
                f"(|diff| = {abs(ratio - row['ratio']):.1e} > {RATIO_TOL:g})"
            )
        if not sigma_ok:
            flags.append(f"k={k}: quoted violation {quoted_sigma} sigma vs recomputed {sigma:.1f} sigma")
        rows.append(
            {
                "k": k,
                "bound": bound,
                "closed_form_bound": 6 * k - 4,
                "svet_transcribed": row["svet"],
                "svet_err_transcribed": row["svet_err"],
                "ratio_transcribed": row["ratio"],
                "ratio_recomputed": ratio,
                "ratio_consistent": ratio_ok,
                "sigma_recomputed": sigma,
                "sigma_quoted": quoted_sigma,
                "sigma_consistent": sigma_ok,
            }
        )
    fit = fit_visibilities({_edge(c["edge"]): c["score"] for c in data["chsh"]})
    report = {
        "note": "svet/ratio/sigma 'transcribed' values are copied from the published table, not computed",
        "table": rows,
        "headline_visibilities": headline_visibilities(),
        "quoted_visibilities": data["quoted_visibilities"],
        "decomposition": boxworld.verify_paper_decomposition().to_dict(),
        "fit": fit.to_dict(),
        "flags": flags,
    }
    if include_oracle:
        report["oracle_vs_closed_form"] = oracle_agreement()
    return report


def oracle_agreement(ks=(2, 3)) -> list[dict]:
    out = []
    for name in ("triangle", "line3"):
        g = named_graph(name)
        for k in ks:
            expr = oracle.ExpressionTable.chained(g, k)
            o = oracle.oracle_max(expr).bound
            closed = network.svetlichny_bound(g, chained_bounds(k))
            loc = oracle.local_max(expr)
            out.append(
                {
                    "graph": name,
                    "k": k,
                    "oracle": float(o),
                    "closed_form": closed,
                    "agree": o == closed,
                    "local": float(loc),
                    "local_expected": (2 * k - 2) * g.n_edges,
                }
            )
    return out

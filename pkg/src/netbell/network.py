"""Payoff arithmetic for bipartite games played in parallel on a graph.

The foil model lets every party except one excluded vertex communicate.
Edges inside the communicating set score up to ``B_S``; edges touching the
excluded vertex are limited to ``B_L``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from itertools import combinations

from .chained import GameBounds, chained_bounds

WITNESS_MARGIN = 1e-12


@dataclass(frozen=True)
class NetworkGraph:
    """Undirected simple graph; nodes are ``0 .. n_nodes-1``."""

    n_nodes: int
    edges: frozenset[tuple[int, int]]

    def __init__(self, n_nodes: int, edges) -> None:
        if n_nodes < 2:
            raise ValueError(f"a network needs at least 2 nodes, got {n_nodes}")
        canon = set()
        for edge in edges:
            i, j = (int(x) for x in edge)
            if i == j:
                raise ValueError(f"self-loop at node {i}")
            if not (0 <= i < n_nodes and 0 <= j < n_nodes):
                raise ValueError(f"edge {(i, j)} references a node outside 0..{n_nodes - 1}")
            e = (min(i, j), max(i, j))
            if e in canon:
                raise ValueError(f"duplicate edge {e}")
            canon.add(e)
        object.__setattr__(self, "n_nodes", int(n_nodes))
        object.__setattr__(self, "edges", frozenset(canon))

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    def neighbors(self, node: int) -> list[int]:
        self._check_node(node)
        return sorted({j for i, j in self.edges if i == node} | {i for i, j in self.edges if j == node})

    def _check_node(self, node: int) -> None:
        if not 0 <= node < self.n_nodes:
            raise IndexError(f"node {node} out of range for {self.n_nodes}-node graph")

    def is_regular(self) -> bool:
        return len({degree(self, v) for v in range(self.n_nodes)}) == 1

    def to_dict(self) -> dict:
        return {"nodes": self.n_nodes, "edges": [list(e) for e in self.sorted_edges()]}

    @classmethod
    def from_dict(cls, data: dict) -> NetworkGraph:
        return cls(int(data["nodes"]), [tuple(e) for e in data["edges"]])

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> NetworkGraph:
        return cls.from_dict(json.loads(text))


def triangle() -> NetworkGraph:
    return NetworkGraph(3, [(0, 1), (1, 2), (0, 2)])


def line3() -> NetworkGraph:
    return NetworkGraph(3, [(0, 1), (1, 2)])


def divided_square() -> NetworkGraph:
    # edges 12, 14, 23, 34, 13 in one-based labels
    return NetworkGraph(4, [(0, 1), (0, 3), (1, 2), (2, 3), (0, 2)])


def cycle(n: int) -> NetworkGraph:
    if n < 3:
        raise ValueError(f"cycle needs n >= 3, got {n}")
    return NetworkGraph(n, [(i, (i + 1) % n) for i in range(n)])


def complete(n: int) -> NetworkGraph:
    return NetworkGraph(n, combinations(range(n), 2))


def named_graph(name: str) -> NetworkGraph:
    """Look up ``triangle``, ``line3``, ``divided-square``, ``cycle:N`` or ``complete:N``."""
    fixed = {"triangle": triangle, "line3": line3, "divided-square": divided_square}
    if name in fixed:
        return fixed[name]()
    family, _, arg = name.partition(":")
    if family in ("cycle", "complete") and arg.isdigit():
        return (cycle if family == "cycle" else complete)(int(arg))
    raise ValueError(f"unknown graph name {name!r}")


def degree(g: NetworkGraph, node: int) -> int:
    g._check_node(node)
    return sum(1 for e in g.edges if node in e)


def min_degree(g: NetworkGraph) -> int:
    return min(degree(g, v) for v in range(g.n_nodes))


def _check_bounds(b: GameBounds) -> None:
    if b.svetlichny < b.local:
        raise ValueError(f"B_S ({b.svetlichny}) must not be below B_L ({b.local})")


def foil_bound_excluding(g: NetworkGraph, b: GameBounds, node: int) -> float:
    """Best foil score when ``node`` is the party left out of the communicating set."""
    d = degree(g, node)
    return b.local * d + b.svetlichny * (g.n_edges - d)


def svetlichny_bound(g: NetworkGraph, b: GameBounds) -> float:
    """Maximum total payoff over the foil model.

    Equals ``B_S*E - (B_S - B_L)*min_degree``, the largest of the
    per-excluded-vertex scores.
    """
    _check_bounds(b)
    return b.svetlichny * g.n_edges - (b.svetlichny - b.local) * min_degree(g)


def quantum_total(g: NetworkGraph, b: GameBounds, v: float) -> float:
    if not 0.0 <= v <= 1.0:
        raise ValueError(f"visibility must lie in [0, 1], got {v}")
    return (v * b.quantum + (1 - v) * b.noise) * g.n_edges


def _require_noise_free(b: GameBounds) -> None:
    if b.noise != 0:
        raise ValueError(
            "closed-form visibility needs B_N = 0; compare quantum_total with svetlichny_bound instead"
        )
    if b.quantum <= 0:
        raise ValueError(f"B_Q must be positive, got {b.quantum}")


def critical_visibility(g: NetworkGraph, b: GameBounds) -> float:
    """Visibility above which parallel quantum play beats the foil bound.

    Values above 1 mean the graph/game pair cannot witness at any visibility.
    """
    _require_noise_free(b)
    _check_bounds(b)
    return b.svetlichny / b.quantum - (b.svetlichny - b.local) * min_degree(g) / (b.quantum * g.n_edges)


def regular_visibility(n_nodes: int, b: GameBounds) -> float:
    if n_nodes < 3:
        raise ValueError(f"n_nodes must be >= 3, got {n_nodes}")
    _require_noise_free(b)
    return (b.svetlichny - 2 * (b.svetlichny - b.local) / n_nodes) / b.quantum


def fully_multipartite_visibility(n: int) -> float:
    """Regular-graph threshold with the chained game at ``k = n`` settings."""
    if n < 3:
        raise ValueError(f"n must be >= 3, got {n}")
    return (n * n - 2) / (n * n * math.cos(math.pi / (2 * n)))


def optimize_k(g: NetworkGraph, k_range: range | tuple[int, int]) -> tuple[int, float]:
    """Number of chained settings minimising the critical visibility on ``g``.

    ``k_range`` is a ``range`` or an inclusive ``(k_min, k_max)`` pair. Ties go
    to the smaller ``k``.
    """
    ks = range(k_range[0], k_range[1] + 1) if isinstance(k_range, tuple) else k_range
    if len(ks) == 0:
        raise ValueError("empty k range")
    if min(ks) < 2:
        raise ValueError("k must be >= 2")
    best_k, best_v = None, math.inf
    for k in sorted(ks):
        v = critical_visibility(g, chained_bounds(k))
        if v < best_v:
            best_k, best_v = k, v
    return best_k, best_v


@dataclass(frozen=True)
class PayoffReport:
    foil_bound: float
    quantum_total: float
    critical_visibility: float | None
    witnessing: bool

    def to_dict(self) -> dict:
        return {
            "foil_bound": self.foil_bound,
            "quantum_total": self.quantum_total,
            "critical_visibility": self.critical_visibility,
            "witnessing": self.witnessing,
        }


def witnesses(total: float, bound: float) -> bool:
    return total > bound + WITNESS_MARGIN


def payoff_report(g: NetworkGraph, b: GameBounds, v: float) -> PayoffReport:
    foil = svetlichny_bound(g, b)
    q = quantum_total(g, b, v)
    crit = critical_visibility(g, b) if b.noise == 0 else None
    return PayoffReport(foil, q, crit, witnesses(q, foil))

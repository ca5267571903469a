"""Exact brute-force maxima of parallel correlator expressions on 3-party graphs.

Each party holds one binary output and one k-valued input per incident
edge. An edge score is the sum of coefficient-weighted correlators, each
correlator averaged uniformly over every input not on that edge.

``oracle_max`` optimises over the foil model: one excluded party answers
from its own inputs only while the other two see each other's inputs.
``local_max`` optimises over fully local deterministic strategies. All
accumulation is in integers; results are exact :class:`fractions.Fraction`.
"""

from __future__ import annotations

import itertools
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .boxworld import NetworkDistribution
from .chained import chained_coefficients
from .network import NetworkGraph, degree, named_graph

SUPPORTED_K = (2, 3)


@dataclass(frozen=True, eq=False)
class ExpressionTable:
    """Per-edge correlator coefficients.

    ``coefficients[(i, j)]`` (``i < j``) is a ``k x k`` integer array whose
    rows index the setting of node ``i`` on that edge.
    """

    graph: NetworkGraph
    k: int
    coefficients: dict[tuple[int, int], np.ndarray]

    def __post_init__(self) -> None:
        if set(self.coefficients) != set(self.graph.edges):
            raise ValueError("expression must give coefficients for exactly the graph's edges")
        for edge, c in self.coefficients.items():
            if np.shape(c) != (self.k, self.k):
                raise ValueError(f"edge {edge}: expected {self.k}x{self.k} coefficients, got {np.shape(c)}")

    @classmethod
    def chained(cls, graph: NetworkGraph, k: int) -> ExpressionTable:
        c = chained_coefficients(k)
        return cls(graph, k, {e: c.copy() for e in graph.edges})

    @classmethod
    def named(cls, family: str, graph: NetworkGraph) -> ExpressionTable:
        name, _, arg = family.partition(":")
        if name != "chained" or not arg.isdigit():
            raise ValueError(f"unknown expression family {family!r}")
        return cls.chained(graph, int(arg))

    def scaled(self, edge: tuple[int, int], factor: int) -> ExpressionTable:
        coeffs = {e: c.copy() for e, c in self.coefficients.items()}
        coeffs[edge] = coeffs[edge] * factor
        return ExpressionTable(self.graph, self.k, coeffs)

    def oriented(self, party: int, neighbour: int) -> np.ndarray:
        """Coefficients with rows indexed by ``party``'s setting on the edge."""
        c = np.asarray(self.coefficients[(min(party, neighbour), max(party, neighbour))], dtype=np.int64)
        return c if party < neighbour else c.T

    def to_dict(self) -> dict:
        return {
            "graph": self.graph.to_dict(),
            "k": self.k,
            "edges": [
                {"edge": list(e), "coefficients": np.asarray(self.coefficients[e]).tolist()}
                for e in sorted(self.coefficients)
            ],
        }

    @classmethod
    def from_dict(cls, data: dict) -> ExpressionTable:
        graph = NetworkGraph.from_dict(data["graph"])
        coeffs = {tuple(sorted(item["edge"])): np.asarray(item["coefficients"], dtype=np.int64) for item in data["edges"]}
        return cls(graph, int(data["k"]), coeffs)

    @classmethod
    def from_json(cls, text: str) -> ExpressionTable:
        return cls.from_dict(json.loads(text))


def _check(expr: ExpressionTable) -> None:
    if expr.graph.n_nodes != 3:
        raise ValueError(f"oracle supports 3-node graphs only, got {expr.graph.n_nodes}")
    if expr.k not in SUPPORTED_K:
        raise ValueError(f"exact oracle supports k in {SUPPORTED_K}, got {expr.k}")
    for c in expr.coefficients.values():
        if not np.issubdtype(np.asarray(c).dtype, np.integer):
            raise TypeError("oracle requires integer coefficient tables")


def _sign_functions(n_inputs: int) -> np.ndarray:
    """All +-1 functions on ``n_inputs`` points, one per row (row index = bit pattern)."""
    idx = np.arange(2**n_inputs)[:, None]
    bits = (idx >> np.arange(n_inputs)[None, :]) & 1
    return (1 - 2 * bits).astype(np.int64)


def _response_table(expr: ExpressionTable, party: int, neighbour: int) -> np.ndarray:
    """Integer value of every response function of ``party``'s output toward ``neighbour``.

    Entry ``f`` is ``sum_m |sum_{x_party} c(x_party[neighbour], m) f(x_party)|``,
    where ``x_party`` runs over all of the party's composite inputs and ``m`` over
    the neighbour's setting on the shared edge. The neighbour answers each
    ``m`` optimally, which is exact whenever its output on this edge may depend
    on ``m``.
    """
    k = expr.k
    nbrs = expr.graph.neighbors(party)
    pos = nbrs.index(neighbour)
    c = expr.oriented(party, neighbour)  # rows: party's setting, cols: neighbour's setting
    inputs = list(itertools.product(range(k), repeat=len(nbrs)))
    weights = np.array([c[x[pos], :] for x in inputs])  # (k^deg, k)
    funcs = _sign_functions(len(inputs))  # (2^(k^deg), k^deg)
    return np.abs(funcs @ weights).sum(axis=1)


def _decode_function(index: int, n_inputs: int) -> tuple[int, ...]:
    return tuple(1 - 2 * ((index >> b) & 1) for b in range(n_inputs))


@dataclass(frozen=True)
class OracleResult:
    bound: Fraction
    excluded_vertex: int | None
    strategy: dict | None
    per_vertex: dict[int, Fraction]
    per_edge: dict[tuple[int, int], Fraction]

    def to_dict(self) -> dict:
        return {
            "bound": float(self.bound),
            "bound_exact": str(self.bound),
            "excluded_vertex": self.excluded_vertex,
            "strategy": self.strategy,
            "per_vertex": {str(v): float(b) for v, b in self.per_vertex.items()},
            "per_edge": {f"{i}-{j}": float(b) for (i, j), b in self.per_edge.items()},
        }


def _chunk_max(tables: list[np.ndarray], lo: int, hi: int) -> tuple[int, int]:
    """Max and argmax of the summed tables over joint indices ``lo <= s < hi``.

    Joint index ``s`` enumerates one function per table, first table fastest.
    """
    sizes = [len(t) for t in tables]
    s = np.arange(lo, hi)
    total = np.zeros(hi - lo, dtype=np.int64)
    rem = s
    for t, n in zip(tables, sizes):
        total += t[rem % n]
        rem = rem // n
    i = int(np.argmax(total))
    return int(total[i]), lo + i


def _excluded_branch(expr: ExpressionTable, v: int, workers: int, chunk: int) -> tuple[Fraction, int, dict, dict]:
    g, k = expr.graph, expr.k
    deg_v = degree(g, v)
    scale = k ** max(deg_v - 1, 0)
    pair = [u for u in range(g.n_nodes) if u != v]
    per_edge_fixed = {}
    for e in g.edges:
        if v not in e:
            # pair edge: outputs chosen per joint input, every term saturates
            per_edge_fixed[e] = int(np.abs(expr.coefficients[e]).sum())
    nbrs = g.neighbors(v)
    tables = [_response_table(expr, v, u) for u in nbrs]
    n_strat = int(np.prod([len(t) for t in tables])) if tables else 1
    if tables:
        bounds = list(range(0, n_strat, chunk)) + [n_strat]
        spans = list(zip(bounds[:-1], bounds[1:]))
        if workers > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                parts = list(pool.map(lambda sp: _chunk_max(tables, *sp), spans))
        else:
            parts = [_chunk_max(tables, *sp) for sp in spans]
        best_val, best_idx = max(parts, key=lambda p: (p[0], -p[1]))
    else:
        best_val, best_idx = 0, 0
    total = Fraction(sum(per_edge_fixed.values()) * scale + best_val, scale)
    # decode argmax and split contributions per edge
    inputs = list(itertools.product(range(k), repeat=len(nbrs)))
    strategy, per_edge = {}, {e: Fraction(val) for e, val in per_edge_fixed.items()}
    rem = best_idx
    for u, t in zip(nbrs, tables):
        f = rem % len(t)
        rem //= len(t)
        outputs = _decode_function(f, len(inputs))
        strategy[f"output_to_{u}"] = {",".join(map(str, x)): o for x, o in zip(inputs, outputs)}
        per_edge[(min(u, v), max(u, v))] = Fraction(int(t[f]), scale)
    return total, n_strat, strategy, per_edge


def oracle_max(
    expr: ExpressionTable, *, workers: int = 1, chunk: int = 1 << 16
) -> OracleResult:
    """Maximum of the expression over the foil model (best choice of excluded party).

    For each excluded party every deterministic response strategy is scored;
    the strategy space may be partitioned into chunks evaluated by ``workers``
    threads and joined by a final max.
    """
    _check(expr)
    best = None
    per_vertex = {}
    for v in range(expr.graph.n_nodes):
        total, _, strategy, per_edge = _excluded_branch(expr, v, workers, chunk)
        per_vertex[v] = total
        if best is None or total > best[0]:
            best = (total, v, strategy, per_edge)
    total, v, strategy, per_edge = best
    return OracleResult(total, v, strategy, per_vertex, per_edge)


def branch_contributions(expr: ExpressionTable, v: int) -> dict[tuple[int, int], Fraction]:
    """Per-edge optimal contributions when ``v`` is the excluded party."""
    _check(expr)
    return _excluded_branch(expr, v, 1, 1 << 16)[3]


def local_edge_max(expr: ExpressionTable, edge: tuple[int, int]) -> Fraction:
    """Best local deterministic score on one edge.

    The enumerated party's output on the edge may depend on all of its
    inputs; the other party answers pointwise.
    """
    i, j = edge
    di, dj = degree(expr.graph, i), degree(expr.graph, j)
    if dj < di:
        i, j, di = j, i, dj
    table = _response_table(expr, i, j)
    return Fraction(int(table.max()), expr.k ** (di - 1))


def local_max(expr: ExpressionTable) -> Fraction:
    """Maximum over fully local deterministic strategies.

    Every output bit enters exactly one edge term, so the optimum is the sum of
    per-edge optima.
    """
    _check(expr)
    return sum((local_edge_max(expr, e) for e in expr.graph.edges), Fraction(0))


def score_distribution(expr: ExpressionTable, dist: NetworkDistribution) -> float:
    """Value of the expression on an explicit network distribution."""
    if dist.graph != expr.graph or dist.n_inputs != expr.k:
        raise ValueError("distribution graph or input count does not match the expression")
    total = 0.0
    for e, c in expr.coefficients.items():
        total += float(np.sum(np.asarray(c) * dist.edge_box(e).correlators()))
    return total


def parse_expression(spec: str, graph: NetworkGraph | str) -> ExpressionTable:
    """Build an expression from ``"chained:k"`` or from a JSON document."""
    if isinstance(graph, str):
        graph = named_graph(graph)
    if spec.lstrip().startswith("{"):
        return ExpressionTable.from_json(spec)
    return ExpressionTable.named(spec, graph)

"""Conditional probability boxes, their parallel composition and locality tests.

Box tables are stored as arrays ``p[a, b, x, y]``. PR-type boxes use the
convention ``a xor b = (x xor 1) * y``: Bob's output is relabelled on input
``y = 1`` relative to the textbook ``a xor b = x*y`` so that the chained
CHSH functional ``<A1B1> + <A2B1> + <A2B2> - <A1B2>`` scores ``+4``.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linprog

from .chained import ChainedGameSpec, chained_coefficients
from .network import NetworkGraph, line3
from .quantum import DensityMatrix, born_probabilities

NORM_TOL = 1e-12
LP_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class Box:
    """Bipartite conditional distribution ``p(a, b | x, y)``."""

    table: np.ndarray

    def __post_init__(self) -> None:
        t = np.array(self.table, dtype=float)
        if t.ndim != 4:
            raise ValueError(f"box table must have axes (a, b, x, y), got shape {t.shape}")
        if t.min() < -NORM_TOL:
            raise ValueError(f"negative probability {t.min():.3e}")
        norm_err = np.abs(t.sum(axis=(0, 1)) - 1).max()
        if norm_err > NORM_TOL:
            raise ValueError(f"box not normalised: max deviation {norm_err:.3e}")
        t.setflags(write=False)
        object.__setattr__(self, "table", t)

    @property
    def n_outputs_a(self) -> int:
        return self.table.shape[0]

    @property
    def n_outputs_b(self) -> int:
        return self.table.shape[1]

    @property
    def n_inputs_a(self) -> int:
        return self.table.shape[2]

    @property
    def n_inputs_b(self) -> int:
        return self.table.shape[3]

    @property
    def shape(self) -> tuple[int, int, int, int]:
        return self.table.shape

    def marginal_a(self) -> np.ndarray:
        """``p(a | x, y)`` with axes (a, x, y)."""
        return self.table.sum(axis=1)

    def marginal_b(self) -> np.ndarray:
        """``p(b | x, y)`` with axes (b, x, y)."""
        return self.table.sum(axis=0)

    @property
    def is_nonsignaling(self) -> bool:
        ma, mb = self.marginal_a(), self.marginal_b()
        return bool(
            np.abs(ma - ma[:, :, :1]).max() <= NORM_TOL and np.abs(mb - mb[:, :1, :]).max() <= NORM_TOL
        )

    def correlators(self) -> np.ndarray:
        """``E[x, y] = sum_ab (-1)^(a+b) p(a,b|x,y)`` for binary outputs."""
        if self.n_outputs_a != 2 or self.n_outputs_b != 2:
            raise ValueError("correlators need binary outputs")
        sign = np.array([[1, -1], [-1, 1]])
        return np.einsum("ab,abxy->xy", sign, self.table)

    def mix(self, other: Box, p: float) -> Box:
        if not 0.0 <= p <= 1.0:
            raise ValueError(f"mixing weight must lie in [0, 1], got {p}")
        return Box(p * self.table + (1 - p) * other.table)

    def relabel(self, flip_a=None, flip_b=None) -> Box:
        """Flip the binary output of A for inputs with ``flip_a[x]`` set (same for B)."""
        t = self.table.copy()
        for x, f in enumerate(flip_a or ()):
            if f:
                t[:, :, x, :] = t[::-1, :, x, :]
        for y, f in enumerate(flip_b or ()):
            if f:
                t[:, :, :, y] = t[:, ::-1, :, y]
        return Box(t)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Box):
            return NotImplemented
        return self.shape == other.shape and np.allclose(self.table, other.table, atol=1e-12, rtol=0)

    __hash__ = None  # type: ignore[assignment]

    def to_dict(self) -> dict:
        oa, ob, ia, ib = self.shape
        return {
            "shape": {"outputs_a": oa, "outputs_b": ob, "inputs_a": ia, "inputs_b": ib},
            "axes": ["a", "b", "x", "y"],
            "table": self.table.ravel().tolist(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> Box:
        s = data["shape"]
        shape = (s["outputs_a"], s["outputs_b"], s["inputs_a"], s["inputs_b"])
        return cls(np.asarray(data["table"], dtype=float).reshape(shape))

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> Box:
        return cls.from_dict(json.loads(text))


def _xor_box(parity) -> Box:
    t = np.zeros((2, 2, 2, 2))
    for a, b, x, y in itertools.product(range(2), repeat=4):
        if a ^ b == parity(x, y):
            t[a, b, x, y] = 0.5
    return Box(t)


def pr_box() -> Box:
    return _xor_box(lambda x, y: (x ^ 1) & y)


def anti_pr_box() -> Box:
    return _xor_box(lambda x, y: ((x ^ 1) & y) ^ 1)


def pr_mix(v: float) -> Box:
    """``v * PR + (1 - v) * anti-PR``."""
    if not 0.0 <= v <= 1.0:
        raise ValueError(f"v must lie in [0, 1], got {v}")
    return Box(v * pr_box().table + (1 - v) * anti_pr_box().table)


TSIRELSON_WEIGHT = (2 + math.sqrt(2)) / 4


def tsirelson_box() -> Box:
    return pr_mix(TSIRELSON_WEIGHT)


def deterministic_box(fa, fb, n_inputs: int = 2) -> Box:
    """Box with outputs ``a = fa(x)`` and ``b = fb(y)``."""
    t = np.zeros((2, 2, n_inputs, n_inputs))
    for x, y in itertools.product(range(n_inputs), repeat=2):
        t[fa(x), fb(y), x, y] = 1.0
    return Box(t)


def uniform_box(n_inputs: int = 2) -> Box:
    return Box(np.full((2, 2, n_inputs, n_inputs), 0.25))


def _check_2222(b: Box) -> None:
    if b.shape != (2, 2, 2, 2):
        raise ValueError(f"expected a 2-input/2-output box, got shape {b.shape}")


def chsh_score(b: Box) -> float:
    _check_2222(b)
    return float(np.sum(chained_coefficients(2) * b.correlators()))


def chained_score_box(b: Box) -> float:
    """Chained expression evaluated on a k-input binary box."""
    if b.n_inputs_a != b.n_inputs_b:
        raise ValueError("chained scoring needs equal input counts")
    return float(np.sum(chained_coefficients(b.n_inputs_a) * b.correlators()))


def box_from_quantum(state: DensityMatrix, spec: ChainedGameSpec) -> Box:
    """Born-rule box of the spec's observables (outcome 0 <-> +1, 1 <-> -1)."""
    if state.dim != 4:
        raise ValueError(f"box_from_quantum needs a two-qubit state, got dim {state.dim}")
    obs_a, obs_b = spec.observables_a(), spec.observables_b()
    t = np.empty((2, 2, spec.k, spec.k))
    for x, a in enumerate(obs_a):
        for y, b in enumerate(obs_b):
            t[:, :, x, y] = born_probabilities(state, a, b)
    return Box(t)


# -- local polytope -------------------------------------------------------------

def deterministic_vertices() -> np.ndarray:
    """The 16 local deterministic 2222 boxes as flattened rows."""
    rows = []
    for a0, a1, b0, b1 in itertools.product(range(2), repeat=4):
        fa, fb = (a0, a1), (b0, b1)
        rows.append(deterministic_box(fa.__getitem__, fb.__getitem__).table.ravel())
    return np.array(rows)


@dataclass(frozen=True)
class LocalityResult:
    """Outcome of the 2222 locality test.

    ``weights`` reconstruct the box from :func:`deterministic_vertices` when
    local; ``witness`` (a functional on flattened tables) and ``local_max``
    separate it from the polytope otherwise.
    """

    local: bool
    weights: np.ndarray | None = None
    witness: np.ndarray | None = None
    local_max: float | None = None
    witness_value: float | None = None
    reconstruction_error: float | None = field(default=None)

    def __bool__(self) -> bool:
        return self.local


def is_local_2222(b: Box, tol: float = LP_TOL) -> LocalityResult:
    """Decide membership of ``b`` in the local polytope.

    Finds the functional ``F`` in ``[-1, 1]^16`` maximising
    ``F.p - max_vertex F.d``. A positive optimum above ``tol`` is a Bell
    inequality violated by ``b``; otherwise a convex combination of the 16
    vertices is solved for and returned.
    """
    _check_2222(b)
    verts = deterministic_vertices()
    p = b.table.ravel()
    n = p.size
    # variables: F (n), s ; maximise F.p - s  <=>  minimise -F.p + s
    c = np.concatenate([-p, [1.0]])
    a_ub = np.hstack([verts, -np.ones((len(verts), 1))])
    b_ub = np.zeros(len(verts))
    bounds = [(-1, 1)] * n + [(None, None)]
    sep = linprog(c, A_ub=a_ub, b_ub=b_ub, bounds=bounds, method="highs")
    if sep.status != 0:
        raise RuntimeError(f"separation LP failed: {sep.message}")
    functional, s = sep.x[:n], sep.x[n]
    gap = float(functional @ p - verts.dot(functional).max())
    if gap > tol:
        return LocalityResult(
            False,
            witness=functional,
            local_max=float(verts.dot(functional).max()),
            witness_value=float(functional @ p),
        )
    weights = _vertex_weights(verts, p)
    err = float(np.abs(weights @ verts - p).max())
    return LocalityResult(True, weights=weights, reconstruction_error=err)


def _vertex_weights(verts: np.ndarray, p: np.ndarray) -> np.ndarray:
    m = len(verts)
    a_eq = np.vstack([verts.T, np.ones((1, m))])
    b_eq = np.concatenate([p, [1.0]])
    res = linprog(
        np.zeros(m),
        A_eq=a_eq,
        b_eq=b_eq,
        bounds=[(0, None)] * m,
        method="highs",
        options={"primal_feasibility_tolerance": 1e-10},
    )
    if res.status != 0:
        raise RuntimeError(f"vertex-weight LP failed on a box judged local: {res.message}")
    w = np.clip(res.x, 0, None)
    # polish on the LP support so reconstruction is exact to round-off
    support = w > 0
    sol, *_ = np.linalg.lstsq(a_eq[:, support], b_eq, rcond=None)
    if sol.min() >= 0:
        w = np.zeros(m)
        w[support] = sol
    return w / w.sum()


# -- parallel composition on a network --------------------------------------------

def slot_order(g: NetworkGraph) -> list[tuple[int, int]]:
    """Output/input slots ``(party, neighbour)``, party-major then neighbour order."""
    return [(v, u) for v in range(g.n_nodes) for u in g.neighbors(v)]


@dataclass(frozen=True, eq=False)
class NetworkDistribution:
    """Joint distribution of composite outcomes for parallel edge games.

    Each party ``v`` holds one binary output and one input per incident edge,
    indexed by slots ``(v, u)`` from :func:`slot_order`. ``table`` has one
    output axis per slot followed by one input axis per slot.
    """

    graph: NetworkGraph
    n_inputs: int
    table: np.ndarray

    def __post_init__(self) -> None:
        t = np.asarray(self.table, dtype=float)
        n_slots = len(slot_order(self.graph))
        expected = (2,) * n_slots + (self.n_inputs,) * n_slots
        if t.shape != expected:
            raise ValueError(f"table shape {t.shape} does not match expected {expected}")
        if t.min() < -NORM_TOL:
            raise ValueError("negative probability in network distribution")
        norm_err = np.abs(t.sum(axis=tuple(range(n_slots))) - 1).max()
        if norm_err > NORM_TOL:
            raise ValueError(f"network distribution not normalised: {norm_err:.3e}")
        t.setflags(write=False)
        object.__setattr__(self, "table", t)

    @property
    def slots(self) -> list[tuple[int, int]]:
        return slot_order(self.graph)

    def edge_box(self, edge: tuple[int, int]) -> Box:
        """Marginal box on ``edge``, averaged uniformly over all other inputs."""
        i, j = edge
        slots = self.slots
        s_i, s_j = slots.index((i, j)), slots.index((j, i))
        n = len(slots)
        out_keep = [s_i, s_j]
        t = self.table.sum(axis=tuple(s for s in range(n) if s not in out_keep))
        # remaining axes: out s_i, out s_j, then n input axes
        in_axes = [2 + s for s in range(n) if s not in (s_i, s_j)]
        t = t.mean(axis=tuple(in_axes))
        if s_i > s_j:
            t = t.transpose(1, 0, 3, 2)
        return Box(t)


TripartiteLineDistribution = NetworkDistribution


def tensor_network(g: NetworkGraph, boxes: dict[tuple[int, int], Box]) -> NetworkDistribution:
    """Product distribution of independent boxes, one per edge (Alice = lower node)."""
    slots = slot_order(g)
    n = len(slots)
    shapes = {b.n_inputs_a for b in boxes.values()} | {b.n_inputs_b for b in boxes.values()}
    if len(shapes) != 1:
        raise ValueError("all edge boxes must share one input count")
    k = shapes.pop()
    if set(boxes) != set(g.edges):
        raise ValueError("need exactly one box per graph edge")
    letters = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ"
    if 2 * n > len(letters):
        raise ValueError("graph too large for dense network distribution")
    out_sym, in_sym = letters[:n], letters[n : 2 * n]
    operands, subs = [], []
    for (i, j), box in sorted(boxes.items()):
        if box.shape != (2, 2, k, k):
            raise ValueError(f"edge {(i, j)} box has shape {box.shape}")
        si, sj = slots.index((i, j)), slots.index((j, i))
        subs.append(out_sym[si] + out_sym[sj] + in_sym[si] + in_sym[sj])
        operands.append(box.table)
    table = np.einsum(",".join(subs) + "->" + out_sym + in_sym, *operands)
    return NetworkDistribution(g, k, table)


def tensor_line(left: Box, right: Box) -> NetworkDistribution:
    """``p(a1, a21, a23, a3 | x1, x21, x23, x3) = left(a1, a21|x1, x21) right(a23, a3|x23, x3)``."""
    if left.shape != (2, 2, 2, 2) or right.shape != (2, 2, 2, 2):
        raise ValueError("tensor_line takes two 2-input/2-output boxes")
    return tensor_network(line3(), {(0, 1): left, (1, 2): right})


# -- explicit Svetlichny decomposition of parallel Tsirelson boxes ------------------

DECOMPOSITION_WEIGHT = (3 + 2 * math.sqrt(2)) / 6


@dataclass(frozen=True)
class DecompositionComponent:
    weight: float
    left_v: float
    right_v: float
    communicating_pair: tuple[int, int]
    local_edge: tuple[int, int]
    local_edge_is_local: bool

    def to_dict(self) -> dict:
        return {
            "weight": self.weight,
            "tag": f"PR12({self.left_v:g}) x PR23({self.right_v:g})",
            "communicating_pair": list(self.communicating_pair),
            "local_edge": list(self.local_edge),
            "local_edge_is_local": self.local_edge_is_local,
        }


@dataclass(frozen=True)
class DecompositionCertificate:
    """Result of checking the four-component decomposition on the line."""

    w: float
    components: tuple[DecompositionComponent, ...]
    max_reconstruction_error: float
    weight_sum: float
    tolerance: float
    failures: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        return {
            "w": self.w,
            "ok": self.ok,
            "weights": [c.weight for c in self.components],
            "components": [c.to_dict() for c in self.components],
            "max_reconstruction_error": self.max_reconstruction_error,
            "weight_sum": self.weight_sum,
            "tolerance": self.tolerance,
            "failures": list(self.failures),
        }


def verify_paper_decomposition(w: float = DECOMPOSITION_WEIGHT, tol: float = 1e-12) -> DecompositionCertificate:
    """Check that four foil-model components reproduce Tsirelson x Tsirelson on the line.

    In each component the edge carrying a pure PR or anti-PR box is assigned
    to the communicating pair, and the other edge's box must be local.
    """
    target = tensor_line(tsirelson_box(), tsirelson_box()).table
    spec = [
        (w / 2, 1.0, 0.75),
        (w / 2, 0.75, 1.0),
        ((1 - w) / 2, 0.0, 0.25),
        ((1 - w) / 2, 0.25, 0.0),
    ]
    failures = []
    components = []
    mixture = np.zeros_like(target)
    for idx, (q, vl, vr) in enumerate(spec):
        if q < 0:
            failures.append(f"component {idx}: negative weight {q}")
        mixture += q * tensor_line(pr_mix(vl), pr_mix(vr)).table
        if vl in (0.0, 1.0):
            pair, local_edge, local_v = (0, 1), (1, 2), vr
        else:
            pair, local_edge, local_v = (1, 2), (0, 1), vl
        is_local = is_local_2222(pr_mix(local_v)).local
        if not is_local:
            failures.append(f"component {idx}: box on edge {local_edge} is not local")
        components.append(DecompositionComponent(q, vl, vr, pair, local_edge, is_local))
    err = float(np.abs(mixture - target).max())
    if err > tol:
        where = np.unravel_index(np.argmax(np.abs(mixture - target)), target.shape)
        failures.append(f"reconstruction error {err:.3e} at entry {tuple(int(i) for i in where)}")
    total = sum(c.weight for c in components)
    if abs(total - 1) > tol:
        failures.append(f"weights sum to {total}")
    return DecompositionCertificate(w, tuple(components), err, total, tol, tuple(failures))

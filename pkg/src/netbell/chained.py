"""Chained (BKP) Bell games with k settings per party."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .quantum import DensityMatrix, Observable, Plane, correlator


@dataclass(frozen=True)
class GameBounds:
    """Local, Svetlichny (algebraic), quantum and white-noise scores of a bipartite game."""

    local: float
    svetlichny: float
    quantum: float
    noise: float = 0.0

    def __post_init__(self) -> None:
        if not (self.local <= self.quantum <= self.svetlichny):
            raise ValueError(
                f"bounds must satisfy B_L <= B_Q <= B_S, got {self.local}, {self.quantum}, {self.svetlichny}"
            )
        if self.noise > self.local:
            raise ValueError(f"noise score {self.noise} exceeds local bound {self.local}")

    def to_dict(self) -> dict:
        return {"B_L": self.local, "B_S": self.svetlichny, "B_Q": self.quantum, "B_N": self.noise}

    @classmethod
    def from_dict(cls, data: dict) -> GameBounds:
        return cls(data["B_L"], data["B_S"], data["B_Q"], data.get("B_N", 0.0))


def _check_k(k: int) -> int:
    if int(k) != k or k < 2:
        raise ValueError(f"number of settings k must be an integer >= 2, got {k}")
    return int(k)


def chained_bounds(k: int) -> GameBounds:
    k = _check_k(k)
    return GameBounds(2 * k - 2, 2 * k, 2 * k * math.cos(math.pi / (2 * k)), 0.0)


def chsh_bounds() -> GameBounds:
    return chained_bounds(2)


def chained_coefficients(k: int) -> np.ndarray:
    """Correlator coefficients of the chained expression.

    Returns a ``k x k`` integer array ``c`` with ``c[la, lb]`` the coefficient
    of ``<A_la B_lb>`` (zero-based setting indices). The wrap-around term
    ``<A_{k+1} B_k> = -<A_1 B_k>`` gives the single ``-1`` at ``[0, k-1]``.
    """
    k = _check_k(k)
    c = np.zeros((k, k), dtype=np.int64)
    for lb in range(k):
        c[lb, lb] += 1
        if lb + 1 < k:
            c[lb + 1, lb] += 1
        else:
            c[0, lb] -= 1
    return c


@dataclass(frozen=True)
class ChainedGameSpec:
    """Measurement angles of both parties for one edge's chained game.

    Only ``k`` angles are stored per party; the wrap-around ``A_{k+1} = -A_1``
    is applied by the scorer.
    """

    k: int
    settings_a: tuple[float, ...]
    settings_b: tuple[float, ...]
    plane: Plane = field(default=Plane.XZ)

    def __post_init__(self) -> None:
        _check_k(self.k)
        object.__setattr__(self, "settings_a", tuple(float(x) for x in self.settings_a))
        object.__setattr__(self, "settings_b", tuple(float(x) for x in self.settings_b))
        object.__setattr__(self, "plane", Plane(self.plane))
        if len(self.settings_a) != self.k or len(self.settings_b) != self.k:
            raise ValueError(
                f"expected {self.k} angles per party, got {len(self.settings_a)} and {len(self.settings_b)}"
            )

    def observables_a(self) -> list[Observable]:
        return [Observable(t, self.plane) for t in self.settings_a]

    def observables_b(self) -> list[Observable]:
        return [Observable(t, self.plane) for t in self.settings_b]

    def to_dict(self) -> dict:
        return {"k": self.k, "plane": self.plane.value, "a": list(self.settings_a), "b": list(self.settings_b)}

    @classmethod
    def from_dict(cls, data: dict) -> ChainedGameSpec:
        return cls(int(data["k"]), data["a"], data["b"], Plane(data.get("plane", "XZ")))

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> ChainedGameSpec:
        return cls.from_dict(json.loads(text))


def optimal_settings(k: int, plane: Plane | str = Plane.XZ) -> ChainedGameSpec:
    """Equally spaced settings reaching ``2k cos(pi/2k)`` on the singlet.

    Party A measures at ``pi (l-1)/k``; party B sits halfway between
    neighbouring A settings, rotated by ``pi`` so that every singlet
    correlator ``-cos(alpha - beta)`` contributes ``+cos(pi/2k)``.
    """
    k = _check_k(k)
    a = [math.pi * l / k for l in range(k)]
    b = [math.pi * (2 * l + 1) / (2 * k) + math.pi for l in range(k)]
    return ChainedGameSpec(k, a, b, Plane(plane))


def correlator_matrix(state: DensityMatrix, spec: ChainedGameSpec) -> np.ndarray:
    """All ``k x k`` correlators ``<A_la B_lb>`` of ``spec`` on ``state``."""
    obs_a, obs_b = spec.observables_a(), spec.observables_b()
    return np.array([[correlator(state, a, b) for b in obs_b] for a in obs_a])


def score_from_correlators(corr: np.ndarray) -> float:
    k = corr.shape[0]
    return float(np.sum(chained_coefficients(k) * corr))


def chained_score(state: DensityMatrix, spec: ChainedGameSpec) -> float:
    """Sum over l of <A_l B_l> + <A_{l+1} B_l> with A_{k+1} = -A_1."""
    if state.dim != 4:
        raise ValueError(f"chained_score needs a two-qubit state, got dim {state.dim}")
    obs_a, obs_b = spec.observables_a(), spec.observables_b()
    total = 0.0
    for l in range(spec.k):
        total += correlator(state, obs_a[l], obs_b[l])
        if l + 1 < spec.k:
            total += correlator(state, obs_a[l + 1], obs_b[l])
        else:
            total -= correlator(state, obs_a[0], obs_b[l])
    return total

"""Small-dimensional qubit states, planar observables and correlators.

Basis ordering is big-endian: |00>, |01>, |10>, |11>, first tensor factor is
the first qubit.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum

import numpy as np

HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-12
PSD_TOL = 1e-10
MAX_DIM = 4

_I2 = np.eye(2, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)


class Plane(str, Enum):
    XZ = "XZ"
    XY = "XY"


class BellLabel(str, Enum):
    PSI_MINUS = "PsiMinus"
    PSI_PLUS = "PsiPlus"


class InvalidStateError(ValueError):
    """Raised when a matrix fails one of the density-matrix invariants."""


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Hermitian, unit-trace, positive semidefinite matrix.

    Construction validates all three invariants; the stored array is
    read-only.
    """

    matrix: np.ndarray

    def __post_init__(self) -> None:
        m = np.array(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise InvalidStateError(f"density matrix must be square, got shape {m.shape}")
        herm_err = np.max(np.abs(m - m.conj().T))
        if herm_err > HERMITIAN_TOL:
            raise InvalidStateError(f"not Hermitian: max |rho - rho^dag| = {herm_err:.3e}")
        tr = np.trace(m)
        if abs(tr - 1.0) > TRACE_TOL:
            raise InvalidStateError(f"trace is {tr.real:.15g}, expected 1")
        min_eig = float(np.linalg.eigvalsh(m).min())
        if min_eig < -PSD_TOL:
            raise InvalidStateError(f"not positive semidefinite: min eigenvalue {min_eig:.3e}")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def purity(self) -> float:
        return float(np.real(np.trace(self.matrix @ self.matrix)))

    def min_eigenvalue(self) -> float:
        return float(np.linalg.eigvalsh(self.matrix).min())

    def partial_trace(self, keep: int) -> DensityMatrix:
        """Reduced state of qubit ``keep`` (0 or 1) of a two-qubit state."""
        if self.dim != 4:
            raise ValueError("partial_trace is only defined for two-qubit states")
        r = self.matrix.reshape(2, 2, 2, 2)
        if keep == 0:
            return DensityMatrix(np.einsum("ijkj->ik", r))
        if keep == 1:
            return DensityMatrix(np.einsum("jijk->ik", r))
        raise ValueError(f"keep must be 0 or 1, got {keep}")

    def mix(self, other: DensityMatrix, p: float) -> DensityMatrix:
        """Convex combination ``p*self + (1-p)*other``."""
        if not 0.0 <= p <= 1.0:
            raise ValueError(f"mixing weight must lie in [0, 1], got {p}")
        return DensityMatrix(p * self.matrix + (1 - p) * other.matrix)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DensityMatrix):
            return NotImplemented
        return self.dim == other.dim and np.allclose(self.matrix, other.matrix, atol=1e-12, rtol=0)

    __hash__ = None  # type: ignore[assignment]


def maximally_mixed(dim: int = 4) -> DensityMatrix:
    return DensityMatrix(np.eye(dim, dtype=complex) / dim)


def pure_state(vector) -> DensityMatrix:
    psi = np.asarray(vector, dtype=complex)
    psi = psi / np.linalg.norm(psi)
    return DensityMatrix(np.outer(psi, psi.conj()))


def basis_state(bits: str) -> DensityMatrix:
    """Projector onto a computational basis state, e.g. ``basis_state("01")``."""
    vec = np.zeros(2 ** len(bits), dtype=complex)
    vec[int(bits, 2)] = 1.0
    return DensityMatrix(np.outer(vec, vec))


def tensor(a: DensityMatrix, b: DensityMatrix, *, max_dim: int = MAX_DIM) -> DensityMatrix:
    dim = a.dim * b.dim
    if dim > max_dim:
        raise ValueError(f"tensor product dimension {dim} exceeds configured maximum {max_dim}")
    return DensityMatrix(np.kron(a.matrix, b.matrix))


def bell_state(label: BellLabel | str) -> DensityMatrix:
    """Projector onto (|10> +- |01>)/sqrt(2)."""
    label = BellLabel(label)
    sign = -1.0 if label is BellLabel.PSI_MINUS else 1.0
    psi = np.zeros(4, dtype=complex)
    psi[0b10] = 1.0
    psi[0b01] = sign
    return pure_state(psi)


@dataclass(frozen=True)
class NoisyStateParams:
    """Visibility ``v`` and coloured-noise fraction ``lam`` of a Bell-diagonal source."""

    v: float
    lam: float = 0.0

    def __post_init__(self) -> None:
        for name, value in (("v", self.v), ("lambda", self.lam)):
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {value}")

    def to_dict(self) -> dict:
        return {"v": self.v, "lambda": self.lam}

    @classmethod
    def from_dict(cls, data: dict) -> NoisyStateParams:
        return cls(v=float(data["v"]), lam=float(data.get("lambda", 0.0)))

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> NoisyStateParams:
        return cls.from_dict(json.loads(text))


def noisy_state(params: NoisyStateParams) -> DensityMatrix:
    """Singlet mixed with coloured (Psi+/Psi- dephasing) and white noise."""
    v, lam = params.v, params.lam
    minus = bell_state(BellLabel.PSI_MINUS).matrix
    plus = bell_state(BellLabel.PSI_PLUS).matrix
    noise = 0.5 * lam * (plus + minus) + 0.25 * (1 - lam) * np.eye(4)
    return DensityMatrix(v * minus + (1 - v) * noise)


@dataclass(frozen=True)
class Observable:
    """Dichotomic qubit observable on a great circle of the Bloch sphere.

    In the XZ plane the operator is ``cos(angle) Z + sin(angle) X``; in the
    XY plane it is ``cos(angle) X + sin(angle) Y``.
    """

    angle: float
    plane: Plane = Plane.XZ

    @property
    def matrix(self) -> np.ndarray:
        c, s = np.cos(self.angle), np.sin(self.angle)
        if Plane(self.plane) is Plane.XZ:
            return c * PAULI_Z + s * PAULI_X
        return c * PAULI_X + s * PAULI_Y

    def projector(self, outcome: int) -> np.ndarray:
        """Projector for outcome 0 (eigenvalue +1) or 1 (eigenvalue -1)."""
        sign = 1 - 2 * outcome
        return 0.5 * (_I2 + sign * self.matrix)


def expectation(state: DensityMatrix, operator: np.ndarray) -> float:
    if operator.shape != state.matrix.shape:
        raise ValueError(f"operator shape {operator.shape} does not match state dim {state.dim}")
    return float(np.real(np.trace(state.matrix @ operator)))


def correlator(state: DensityMatrix, a: Observable, b: Observable) -> float:
    """<A (x) B> on a two-qubit state, clamped to [-1, 1]."""
    if state.dim != 4:
        raise ValueError(f"correlator needs a two-qubit state, got dim {state.dim}")
    value = expectation(state, np.kron(a.matrix, b.matrix))
    if abs(value) > 1 + PSD_TOL:
        raise ArithmeticError(f"correlator {value} outside [-1, 1] beyond tolerance")
    return min(1.0, max(-1.0, value))


def born_probabilities(state: DensityMatrix, a: Observable, b: Observable) -> np.ndarray:
    """2x2 array ``p[a, b]`` of outcome probabilities (0 <-> +1, 1 <-> -1)."""
    if state.dim != 4:
        raise ValueError(f"expected a two-qubit state, got dim {state.dim}")
    probs = np.empty((2, 2))
    for oa in range(2):
        for ob in range(2):
            probs[oa, ob] = expectation(state, np.kron(a.projector(oa), b.projector(ob)))
    probs = np.clip(probs, 0.0, None)
    return probs / probs.sum()

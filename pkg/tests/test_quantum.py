import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from netbell.quantum import (
    BellLabel,
    DensityMatrix,
    InvalidStateError,
    NoisyStateParams,
    Observable,
    Plane,
    PAULI_X,
    PAULI_Z,
    basis_state,
    bell_state,
    born_probabilities,
    correlator,
    maximally_mixed,
    noisy_state,
    tensor,
)

from conftest import random_density_matrix

unit = st.floats(min_value=0.0, max_value=1.0)
angles = st.floats(min_value=-2 * math.pi, max_value=2 * math.pi)


def assert_valid(rho: DensityMatrix) -> None:
    m = rho.matrix
    assert np.abs(m - m.conj().T).max() <= 1e-12
    assert abs(np.trace(m) - 1) <= 1e-12
    assert np.linalg.eigvalsh(m).min() >= -1e-10


class TestDensityMatrix:
    def test_rejects_non_hermitian(self):
        with pytest.raises(InvalidStateError, match="Hermitian"):
            DensityMatrix(np.array([[0.5, 0.1], [0.0, 0.5]]))

    def test_rejects_bad_trace(self):
        with pytest.raises(InvalidStateError, match="trace"):
            DensityMatrix(np.eye(2))

    def test_rejects_negative_eigenvalue_and_reports_it(self):
        with pytest.raises(InvalidStateError, match=r"-5\.000e-01"):
            DensityMatrix(np.diag([1.5, -0.5]))

    def test_matrix_is_read_only(self):
        rho = maximally_mixed(2)
        with pytest.raises(ValueError):
            rho.matrix[0, 0] = 1


class TestTensor:
    def test_maximally_mixed(self):
        assert tensor(maximally_mixed(2), maximally_mixed(2)) == maximally_mixed(4)

    def test_basis_product(self):
        assert tensor(basis_state("0"), basis_state("1")) == basis_state("01")

    def test_trace_multiplicative(self, rng):
        for _ in range(20):
            rho = tensor(random_density_matrix(rng, 2), random_density_matrix(rng, 2))
            assert abs(np.trace(rho.matrix) - 1) <= 1e-12
            assert_valid(rho)

    def test_dimension_overflow(self):
        with pytest.raises(ValueError, match="exceeds"):
            tensor(maximally_mixed(4), maximally_mixed(2))


class TestBellStates:
    def test_psi_minus_coherence(self):
        # rows/cols |01> = 1, |10> = 2
        assert bell_state(BellLabel.PSI_MINUS).matrix[1, 2] == pytest.approx(-0.5, abs=1e-15)

    def test_psi_plus_coherence(self):
        assert bell_state("PsiPlus").matrix[1, 2] == pytest.approx(0.5, abs=1e-15)

    @pytest.mark.parametrize("label", list(BellLabel))
    def test_pure_and_maximally_entangled(self, label):
        rho = bell_state(label)
        assert rho.purity == pytest.approx(1.0, abs=1e-12)
        assert rho.partial_trace(0) == maximally_mixed(2)
        assert rho.partial_trace(1) == maximally_mixed(2)


class TestNoisyState:
    def test_noiseless_limit(self):
        for lam in (0.0, 0.3, 1.0):
            assert noisy_state(NoisyStateParams(1.0, lam)) == bell_state("PsiMinus")

    def test_white_noise(self):
        assert noisy_state(NoisyStateParams(0.0, 0.0)) == maximally_mixed(4)

    def test_pure_coloured_noise(self):
        # (|Psi+><Psi+| + |Psi-><Psi-|)/2 expands to the dephased mixture of |01>, |10>
        expected = 0.5 * (basis_state("01").matrix + basis_state("10").matrix)
        assert np.allclose(noisy_state(NoisyStateParams(0.0, 1.0)).matrix, expected, atol=1e-15)

    @pytest.mark.parametrize("v,lam", [(-0.1, 0.0), (1.1, 0.0), (0.5, -0.01), (0.5, 1.5)])
    def test_out_of_range(self, v, lam):
        with pytest.raises(ValueError):
            NoisyStateParams(v, lam)

    @given(unit, unit)
    def test_always_valid(self, v, lam):
        assert_valid(noisy_state(NoisyStateParams(v, lam)))

    def test_json_round_trip(self):
        p = NoisyStateParams(0.93, 0.2)
        assert p.to_dict() == {"v": 0.93, "lambda": 0.2}
        assert NoisyStateParams.from_json(p.to_json()) == p


class TestObservable:
    @given(angles, st.sampled_from(list(Plane)))
    def test_dichotomic(self, angle, plane):
        m = Observable(angle, plane).matrix
        assert np.allclose(m @ m, np.eye(2), atol=1e-12)
        assert np.allclose(np.linalg.eigvalsh(m), [-1, 1], atol=1e-12)

    def test_xz_axes(self):
        assert np.allclose(Observable(0.0).matrix, PAULI_Z)
        assert np.allclose(Observable(math.pi / 2).matrix, PAULI_X)


def singlet_correlator_closed_form(alpha: float, beta: float) -> float:
    # <(a.sigma) (x) (b.sigma)> = -a.b on the singlet; planar unit vectors
    return -math.cos(alpha - beta)


class TestCorrelator:
    def test_singlet_zz(self):
        z = Observable(0.0)
        assert correlator(bell_state("PsiMinus"), z, z) == pytest.approx(-1.0, abs=1e-15)

    def test_maximally_mixed(self, rng):
        for _ in range(10):
            a, b = (Observable(t) for t in rng.uniform(-4, 4, 2))
            assert correlator(maximally_mixed(4), a, b) == pytest.approx(0.0, abs=1e-15)

    @pytest.mark.parametrize("plane", list(Plane))
    def test_singlet_grid(self, rng, plane):
        singlet = bell_state("PsiMinus")
        for alpha, beta in rng.uniform(-math.pi, math.pi, size=(100, 2)):
            got = correlator(singlet, Observable(alpha, plane), Observable(beta, plane))
            assert got == pytest.approx(singlet_correlator_closed_form(alpha, beta), abs=1e-10)

    def test_bilinear_in_state(self, rng):
        for _ in range(50):
            rho, sigma = random_density_matrix(rng), random_density_matrix(rng)
            p = rng.uniform()
            a, b = Observable(rng.uniform(0, 6)), Observable(rng.uniform(0, 6), Plane.XY)
            mixed = rho.mix(sigma, p)
            lhs = correlator(mixed, a, b)
            rhs = p * correlator(rho, a, b) + (1 - p) * correlator(sigma, a, b)
            assert lhs == pytest.approx(rhs, abs=1e-12)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            correlator(maximally_mixed(2), Observable(0), Observable(0))

    def test_born_probabilities_match_correlator(self, rng):
        rho = random_density_matrix(rng)
        a, b = Observable(0.3), Observable(1.9)
        p = born_probabilities(rho, a, b)
        assert p.sum() == pytest.approx(1.0, abs=1e-12)
        assert p[0, 0] + p[1, 1] - p[0, 1] - p[1, 0] == pytest.approx(correlator(rho, a, b), abs=1e-12)


@settings(max_examples=50)
@given(st.lists(unit, min_size=3, max_size=3), unit)
def test_mixtures_stay_valid(weights, lam):
    total = sum(weights) or 1.0
    w = [x / total for x in weights] if sum(weights) else [1.0, 0.0, 0.0]
    m = w[0] * bell_state("PsiMinus").matrix + w[1] * noisy_state(NoisyStateParams(0.0, lam)).matrix
    m = m + w[2] * maximally_mixed(4).matrix
    assert_valid(DensityMatrix(m / np.trace(m).real))

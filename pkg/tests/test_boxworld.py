import itertools
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from netbell.boxworld import (
    DECOMPOSITION_WEIGHT,
    TSIRELSON_WEIGHT,
    Box,
    anti_pr_box,
    box_from_quantum,
    chained_score_box,
    chsh_score,
    deterministic_box,
    deterministic_vertices,
    is_local_2222,
    pr_box,
    pr_mix,
    tensor_line,
    tensor_network,
    tsirelson_box,
    uniform_box,
    verify_paper_decomposition,
)
from netbell.chained import ChainedGameSpec, chained_bounds, chained_score, optimal_settings
from netbell.network import line3, triangle, svetlichny_bound
from netbell.quantum import NoisyStateParams, bell_state, maximally_mixed, noisy_state

from conftest import random_density_matrix

SINGLET = bell_state("PsiMinus")
unit = st.floats(min_value=0.0, max_value=1.0)


def chsh_direct(table: np.ndarray) -> float:
    """CHSH computed term by term from p(a,b|x,y), independent of the library scorer."""

    def corr(x, y):
        return sum((-1) ** (a + b) * table[a, b, x, y] for a in range(2) for b in range(2))

    return corr(0, 0) + corr(1, 0) + corr(1, 1) - corr(0, 1)


class TestBox:
    def test_rejects_unnormalised(self):
        with pytest.raises(ValueError, match="normalised"):
            Box(np.full((2, 2, 2, 2), 0.3))

    def test_rejects_negative(self):
        t = np.full((2, 2, 2, 2), 0.25)
        t[0, 0, 0, 0], t[1, 1, 0, 0] = -0.1, 0.6
        with pytest.raises(ValueError, match="negative"):
            Box(t)

    def test_signalling_flag(self):
        # b copies x: normalised but signalling
        t = np.zeros((2, 2, 2, 2))
        for x, y in itertools.product(range(2), repeat=2):
            t[0, x, x, y] = 1
        box = Box(t)
        assert not box.is_nonsignaling
        assert pr_box().is_nonsignaling

    def test_json_round_trip(self):
        b = tsirelson_box()
        assert Box.from_json(b.to_json()) == b
        assert b.to_dict()["shape"] == {"outputs_a": 2, "outputs_b": 2, "inputs_a": 2, "inputs_b": 2}


class TestPRFamily:
    def test_scores(self):
        assert chsh_score(pr_box()) == 4
        assert chsh_score(anti_pr_box()) == -4
        assert chsh_direct(pr_box().table) == 4

    def test_pr_is_relabelled_xor_box(self):
        # a xor b = x*y with Bob's output flipped on y=1
        textbook = np.zeros((2, 2, 2, 2))
        for a, b, x, y in itertools.product(range(2), repeat=4):
            textbook[a, b, x, y] = 0.5 if a ^ b == x * y else 0.0
        assert Box(textbook).relabel(flip_b=[0, 1]) == pr_box()
        assert chsh_score(Box(textbook)) == 0

    @given(unit)
    def test_mix_score_linear(self, v):
        assert chsh_score(pr_mix(v)) == pytest.approx(8 * v - 4, abs=1e-12)

    def test_midpoint(self):
        assert chsh_score(pr_mix(0.5)) == pytest.approx(0.0, abs=1e-15)
        assert pr_mix(0.5) == uniform_box()

    def test_uniform_marginals(self):
        b = pr_mix(0.75)
        assert np.allclose(b.marginal_a(), 0.5) and np.allclose(b.marginal_b(), 0.5)

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            pr_mix(1.01)

    def test_tsirelson(self):
        assert TSIRELSON_WEIGHT == pytest.approx(0.853553, abs=1e-6)
        assert chsh_score(tsirelson_box()) == pytest.approx(2 * math.sqrt(2), abs=1e-12)

    def test_deterministic_and_uniform(self):
        assert chsh_score(deterministic_box(lambda x: 0, lambda y: 0)) == 2
        assert chsh_score(uniform_box()) == 0

    def test_wrong_shape(self):
        with pytest.raises(ValueError):
            chsh_score(uniform_box(3))

    def test_affine_under_mixing(self, rng):
        boxes = [pr_box(), anti_pr_box(), uniform_box(), deterministic_box(lambda x: x, lambda y: 1)]
        for _ in range(50):
            b1, b2 = rng.choice(len(boxes), 2)
            p = rng.uniform()
            mixed = boxes[b1].mix(boxes[b2], p)
            expected = p * chsh_score(boxes[b1]) + (1 - p) * chsh_score(boxes[b2])
            assert chsh_score(mixed) == pytest.approx(expected, abs=1e-12)


class TestQuantumBoxes:
    def test_singlet_chsh_is_tsirelson(self):
        # declared relabelling: identity (outcome 0 <-> +1 on both sides)
        q = box_from_quantum(SINGLET, optimal_settings(2))
        assert np.abs(q.table - tsirelson_box().table).max() <= 1e-9

    def test_white_noise(self):
        for k in (2, 3, 5):
            assert np.allclose(box_from_quantum(maximally_mixed(4), optimal_settings(k)).table, 0.25, atol=1e-15)

    @pytest.mark.parametrize("k", range(2, 7))
    def test_nonsignalling(self, k):
        assert box_from_quantum(SINGLET, optimal_settings(k)).is_nonsignaling

    def test_two_paths_agree(self, rng):
        for _ in range(30):
            k = int(rng.integers(2, 6))
            spec = ChainedGameSpec(k, rng.uniform(0, 6, k), rng.uniform(0, 6, k), rng.choice(["XZ", "XY"]))
            rho = random_density_matrix(rng)
            assert chained_score_box(box_from_quantum(rho, spec)) == pytest.approx(chained_score(rho, spec), abs=1e-12)

    def test_noisy_chsh_two_paths(self):
        rho = noisy_state(NoisyStateParams(0.9, 0.3))
        spec = optimal_settings(2)
        assert chsh_score(box_from_quantum(rho, spec)) == pytest.approx(chained_score(rho, spec), abs=1e-12)


class TestLocality:
    def test_pr_nonlocal_with_witness(self):
        r = is_local_2222(pr_box())
        assert not r.local
        assert r.witness_value - r.local_max >= 1e-9

    def test_boundary_local(self):
        r = is_local_2222(pr_mix(0.75))
        assert r.local and r.reconstruction_error <= 1e-9

    def test_deterministic_local(self):
        assert is_local_2222(deterministic_box(lambda x: x, lambda y: 1 - y)).local

    def test_vertices(self):
        verts = deterministic_vertices()
        assert verts.shape == (16, 16)
        assert len({tuple(v) for v in verts}) == 16

    @pytest.mark.parametrize("i", range(101))
    def test_pr_mix_grid(self, i):
        v = i / 100
        r = is_local_2222(pr_mix(v))
        assert r.local == (0.25 <= v <= 0.75)
        table = pr_mix(v).table.ravel()
        if r.local:
            assert np.abs(r.weights @ deterministic_vertices() - table).max() <= 1e-9
            assert r.weights.min() >= 0 and r.weights.sum() == pytest.approx(1, abs=1e-12)
        else:
            verts = deterministic_vertices()
            assert r.witness @ table - (verts @ r.witness).max() >= 1e-9

    def test_random_local_mixtures(self, rng):
        verts = deterministic_vertices()
        for _ in range(20):
            w = rng.dirichlet(np.ones(16))
            box = Box((w @ verts).reshape(2, 2, 2, 2))
            r = is_local_2222(box)
            assert r.local and r.reconstruction_error <= 1e-9


class TestTensorLine:
    def test_deterministic(self):
        d1 = deterministic_box(lambda x: x, lambda y: 0)
        d2 = deterministic_box(lambda x: 1, lambda y: y)
        t = tensor_line(d1, d2).table
        assert set(np.unique(t)) <= {0.0, 1.0}

    def test_marginal_is_factor(self):
        left, right = tsirelson_box(), pr_mix(0.3)
        dist = tensor_line(left, right)
        assert dist.edge_box((0, 1)) == left
        assert dist.edge_box((1, 2)) == right

    def test_entry_formula(self, rng):
        left, right = pr_mix(0.9), tsirelson_box()
        t = tensor_line(left, right).table
        for _ in range(20):
            a1, a21, a23, a3, x1, x21, x23, x3 = rng.integers(0, 2, 8)
            assert t[a1, a21, a23, a3, x1, x21, x23, x3] == pytest.approx(
                left.table[a1, a21, x1, x21] * right.table[a23, a3, x23, x3], abs=1e-15
            )

    def test_parallel_tsirelson_line_total(self):
        dist = tensor_line(tsirelson_box(), tsirelson_box())
        total = chsh_score(dist.edge_box((0, 1))) + chsh_score(dist.edge_box((1, 2)))
        assert total == pytest.approx(4 * math.sqrt(2), abs=1e-12)
        assert total < svetlichny_bound(line3(), chained_bounds(2)) == 6

    def test_triangle_network(self):
        boxes = {e: box_from_quantum(SINGLET, optimal_settings(3)) for e in triangle().edges}
        dist = tensor_network(triangle(), boxes)
        for e in triangle().edges:
            assert dist.edge_box(e) == boxes[e]


class TestDecomposition:
    def test_certificate(self):
        cert = verify_paper_decomposition()
        assert cert.ok, cert.failures
        assert len(cert.components) == 4
        w = DECOMPOSITION_WEIGHT
        assert [c.weight for c in cert.components] == pytest.approx([w / 2, w / 2, (1 - w) / 2, (1 - w) / 2])
        assert cert.max_reconstruction_error <= 1e-12
        assert all(c.local_edge_is_local for c in cert.components)
        for c in cert.components:
            pure = c.left_v if c.communicating_pair == (0, 1) else c.right_v
            assert pure in (0.0, 1.0)

    def test_weight(self):
        assert DECOMPOSITION_WEIGHT == pytest.approx(0.9714045, abs=1e-7)

    def test_perturbed_weight_fails(self):
        cert = verify_paper_decomposition(0.95)
        assert not cert.ok
        assert cert.max_reconstruction_error > 1e-3
        assert any("reconstruction error" in f for f in cert.failures)

    def test_weight_is_unique(self):
        # the decomposition pins w: first moments give (3/4)(2w - 1) = sqrt(2)/2
        assert (0.75 * (2 * DECOMPOSITION_WEIGHT - 1)) == pytest.approx(math.sqrt(2) / 2, abs=1e-15)

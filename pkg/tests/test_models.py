"""Lattice models: Hamiltonian structure, disorder, geometry."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from keldysh_entropy import models
from keldysh_entropy.errors import ConfigurationError
from keldysh_entropy.models import (
    DisorderRealization,
    LatticeSpec,
    ModelParams,
    Variant,
    build_hamiltonian,
    draw_realization,
    neel_occupation,
    operator_site,
)


def build(variant, L, dimension, index=0, **kw):
    spec = LatticeSpec(dimension=dimension, L=L)
    params = ModelParams(variant=variant, **kw)
    r = draw_realization(params, index, n_sites=spec.n_sites)
    return spec, params, build_hamiltonian(spec, params, r)


class TestCleanChain:
    def test_clean_1d_structure(self):
        # L=4 ring: unit hoppings with periodic wrap, zero diagonal
        _, _, h = build(Variant.CLEAN_TB, 4, 1)
        expected = np.zeros((4, 4))
        for i in range(4):
            expected[i, (i + 1) % 4] = 1.0
            expected[(i + 1) % 4, i] = 1.0
        np.testing.assert_array_equal(h.matrix, expected)

    def test_clean_equals_aa_at_zero_strength(self):
        _, _, h_clean = build(Variant.CLEAN_TB, 10, 1)
        _, _, h_aa = build(Variant.AA1D, 10, 1, V=0.0)
        np.testing.assert_array_equal(h_clean.matrix, h_aa.matrix)

    def test_clean_equals_anderson_at_zero_strength(self):
        _, _, h_clean = build(Variant.CLEAN_TB, 6, 2)
        _, _, h_and = build(Variant.ANDERSON2D, 6, 2, W=0.0)
        np.testing.assert_array_equal(h_clean.matrix, h_and.matrix)


class TestQuasiperiodicPotential:
    def test_aa1d_diagonal_matches_direct_cosine(self):
        # independent oracle: scalar evaluation of 2 V cos(2 pi b r) per site
        L, V = 12, 0.5
        b = models.GOLDEN_RATIO_CONJUGATE
        spec = LatticeSpec(dimension=1, L=L)
        params = ModelParams(variant=Variant.AA1D, V=V)
        r = DisorderRealization(phases=(0.0,), onsite=None, index=0)
        h = build_hamiltonian(spec, params, r)
        for site in range(L):
            label = site + 1  # 1-based site label in the potential formula
            expected = 2.0 * V * math.cos(2.0 * math.pi * b * label)
            assert h.matrix[site, site] == pytest.approx(expected, abs=1e-14)

    def test_aa2d_diagonal_matches_direct_cosine(self):
        L, V, theta = 4, 0.7, math.pi / 7
        b = models.GOLDEN_RATIO_CONJUGATE
        spec = LatticeSpec(dimension=2, L=L)
        params = ModelParams(variant=Variant.AA2D, V=V, theta=theta)
        phases = (0.3, 1.1)
        r = DisorderRealization(phases=phases, onsite=None, index=0)
        h = build_hamiltonian(spec, params, r)
        c, s = math.cos(theta), math.sin(theta)
        B = b * np.array([[c, -s], [s, c]])
        for x in range(L):
            for y in range(L):
                coords = np.array([x + 1, y + 1], dtype=float)
                expected = sum(
                    2.0 * V * math.cos(2.0 * math.pi * (B[mu] @ coords) + phases[mu])
                    for mu in range(2)
                )
                flat = spec.site_index(x, y)
                assert h.matrix[flat, flat].real == pytest.approx(expected, abs=1e-12)

    def test_phase_shift_by_two_pi_is_identity(self):
        spec = LatticeSpec(dimension=1, L=16)
        params = ModelParams(variant=Variant.AA1D, V=1.3)
        r1 = DisorderRealization(phases=(0.7,), onsite=None, index=0)
        r2 = DisorderRealization(phases=(0.7 + 2 * math.pi,), onsite=None, index=0)
        h1 = build_hamiltonian(spec, params, r1)
        h2 = build_hamiltonian(spec, params, r2)
        assert np.max(np.abs(h1.matrix - h2.matrix)) < 1e-12

    def test_aa2d_hopping_phases(self):
        spec = LatticeSpec(dimension=2, L=4)
        params = ModelParams(variant=Variant.AA2D, V=0.0)
        phases = (0.4, 1.9)
        r = DisorderRealization(phases=phases, onsite=None, index=0)
        h = build_hamiltonian(spec, params, r)
        # +x bond: H[r + x, r] = exp(i phi_x); +y bond: exp(i phi_y)
        r0 = spec.site_index(1, 2)
        assert h.matrix[spec.site_index(2, 2), r0] == pytest.approx(np.exp(1j * phases[0]))
        assert h.matrix[spec.site_index(1, 3), r0] == pytest.approx(np.exp(1j * phases[1]))

    def test_nnn_hopping_in_2d(self):
        spec = LatticeSpec(dimension=2, L=4)
        params = ModelParams(variant=Variant.AA2D, V=0.0, tprime=1 / 3)
        r = draw_realization(params, 0)
        h = build_hamiltonian(spec, params, r)
        assert h.matrix[spec.site_index(2, 3), spec.site_index(1, 2)] == pytest.approx(1 / 3)
        assert h.matrix[spec.site_index(2, 1), spec.site_index(1, 2)] == pytest.approx(1 / 3)


class TestAnderson:
    def test_diagonal_bounded_and_offdiagonal_clean(self):
        spec, _, h = build(Variant.ANDERSON2D, 6, 2, W=2.0)
        diag = np.diag(h.matrix)
        assert np.all(diag >= -2.0) and np.all(diag <= 2.0)
        _, _, h_clean = build(Variant.CLEAN_TB, 6, 2)
        off = h.matrix - np.diag(diag)
        np.testing.assert_array_equal(off, h_clean.matrix)

    def test_uniform_disorder_statistics(self):
        # 1e4 draws: mean within +-0.05 of 0, support inside [-W, W]
        params = ModelParams(variant=Variant.ANDERSON2D, W=2.0, seed=5)
        values = np.concatenate(
            [draw_realization(params, k, n_sites=100).onsite for k in range(100)]
        )
        assert values.size == 10_000
        assert abs(values.mean()) < 0.05
        assert values.min() >= -2.0 and values.max() <= 2.0


class TestDisorderRealizations:
    def test_determinism(self):
        params = ModelParams(variant=Variant.ANDERSON2D, W=1.5, seed=7)
        a = draw_realization(params, 3, n_sites=64)
        b = draw_realization(params, 3, n_sites=64)
        assert a.phases == b.phases
        np.testing.assert_array_equal(a.onsite, b.onsite)

    def test_distinct_indices_differ(self):
        params = ModelParams(variant=Variant.AA1D, V=1.0, seed=7)
        assert draw_realization(params, 0).phases != draw_realization(params, 1).phases

    def test_2d_aa_draw_has_two_phases_in_range(self):
        params = ModelParams(variant=Variant.AA2D, V=0.5, seed=1)
        r = draw_realization(params, 0)
        assert len(r.phases) == 2
        assert all(0.0 <= p < 2 * math.pi for p in r.phases)

    def test_negative_index_rejected(self):
        params = ModelParams(variant=Variant.AA1D)
        with pytest.raises(ConfigurationError):
            draw_realization(params, -1)


@settings(deadline=None, max_examples=25)
@given(
    variant=st.sampled_from([Variant.AA1D, Variant.AA2D, Variant.ANDERSON2D, Variant.CLEAN_TB]),
    L=st.sampled_from([4, 6, 8]),
    index=st.integers(min_value=0, max_value=5),
    strength=st.floats(min_value=0.0, max_value=3.0),
)
def test_every_hamiltonian_is_exactly_hermitian(variant, L, index, strength):
    dimension = 1 if variant == Variant.AA1D else 2
    if variant == Variant.CLEAN_TB:
        dimension = 1 if L % 4 == 0 else 2
    spec = LatticeSpec(dimension=dimension, L=L)
    kw = {"V": strength} if variant in (Variant.AA1D, Variant.AA2D) else {"W": strength}
    params = ModelParams(variant=variant, seed=3, **(kw if variant != Variant.CLEAN_TB else {}))
    r = draw_realization(params, index, n_sites=spec.n_sites)
    h = build_hamiltonian(spec, params, r)
    assert np.array_equal(h.matrix, h.matrix.conj().T)


class TestOperatorSite:
    def test_1d_l8_matches_exhaustive_distance_maximization(self):
        # independent oracle: hop distance to leave A, maximized over A
        spec = LatticeSpec(dimension=1, L=8)
        a = set(spec.a_sites())
        def dist_to_b(site):
            for radius in range(1, spec.L):
                if (site + radius) % spec.L not in a or (site - radius) % spec.L not in a:
                    return radius
            return spec.L
        best = max(dist_to_b(s) for s in a)
        l = operator_site(spec)
        assert l in a
        assert dist_to_b(l) == best
        assert l == 1  # 1-based site label 2 = floor(L/4)

    def test_1d_l576_distance_from_boundary(self):
        spec = LatticeSpec(dimension=1, L=576)
        assert operator_site(spec) == 143  # 1-based label 144 = L/4

    def test_2d_l32_center_column_central_row(self):
        spec = LatticeSpec(dimension=2, L=32)
        l = operator_site(spec)
        x, y = divmod(l, 32)
        assert (x + 1, y + 1) == (8, 16)  # 1-based (column, row)
        # independent check: x = 7 maximizes torus distance to the B columns
        dists = {c: min(min((c - b) % 32, (b - c) % 32) for b in range(16, 32)) for c in range(16)}
        assert dists[x] == max(dists.values())
        assert x == min(c for c, d in dists.items() if d == dists[x])

    def test_site_always_interior_to_a(self):
        for dimension, L in ((1, 8), (1, 128), (1, 576), (2, 8), (2, 12), (2, 32)):
            spec = LatticeSpec(dimension=dimension, L=L)
            l = operator_site(spec)
            assert l in set(spec.a_sites())
            if dimension == 1:
                assert l not in (0, spec.n_a - 1)  # not adjacent to B
            else:
                x = l // L
                assert x not in (0, L // 2 - 1)

    def test_too_small_lattice_rejected(self):
        with pytest.raises(ConfigurationError):
            operator_site(LatticeSpec(dimension=1, L=4))


class TestNeelOccupation:
    def test_1d_l4(self):
        spec = LatticeSpec(dimension=1, L=4)
        np.testing.assert_array_equal(neel_occupation(spec), [0, 2])

    def test_half_filling_at_l576(self):
        spec = LatticeSpec(dimension=1, L=576)
        assert len(neel_occupation(spec)) == 288

    def test_2d_l4_alternates_along_flat_order(self):
        spec = LatticeSpec(dimension=2, L=4)
        occ = set(neel_occupation(spec))
        assert len(occ) == 8
        for site in range(spec.n_sites - 1):
            assert not (site in occ and site + 1 in occ)


class TestConfigurationErrors:
    def test_odd_length_rejected(self):
        with pytest.raises(ConfigurationError):
            LatticeSpec(dimension=1, L=7)

    def test_variant_dimension_mismatch(self):
        spec = LatticeSpec(dimension=2, L=4)
        params = ModelParams(variant=Variant.AA1D, V=1.0)
        with pytest.raises(ConfigurationError):
            build_hamiltonian(spec, params, draw_realization(params, 0))

    def test_nnn_hopping_rejected_in_1d(self):
        spec = LatticeSpec(dimension=1, L=8)
        params = ModelParams(variant=Variant.CLEAN_TB, tprime=1 / 3)
        with pytest.raises(ConfigurationError):
            build_hamiltonian(spec, params, draw_realization(params, 0))

    def test_negative_strength_rejected(self):
        with pytest.raises(ConfigurationError):
            ModelParams(variant=Variant.AA1D, V=-0.1)

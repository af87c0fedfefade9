"""Many-body reference implementation: Fock spaces, traces, entropies."""

import math
from itertools import combinations

import numpy as np
import pytest

from keldysh_entropy import ed_oracle, models, spectral
from keldysh_entropy.ed_oracle import (
    FockSpace,
    evolve_operator,
    number_operator,
    operator_renyi_ed,
    partial_trace_b,
    second_quantize,
    state_entropies_ed,
)
from keldysh_entropy.errors import CapacityError
from keldysh_entropy.models import LatticeSpec, ModelParams, Variant

TWO_SITE_HOP = np.array([[0.0, 1.0], [1.0, 0.0]])


def chain(L, V=0.0, seed=0, index=0):
    spec = LatticeSpec(dimension=1, L=L)
    variant = Variant.CLEAN_TB if V == 0 else Variant.AA1D
    kw = {} if V == 0 else {"V": V}
    params = ModelParams(variant=variant, seed=seed, **kw)
    h = models.build_hamiltonian(spec, params, models.draw_realization(params, index))
    return spec, h


class TestFockSpace:
    def test_full_dimension_and_order(self):
        space = FockSpace.full(3)
        np.testing.assert_array_equal(space.basis, np.arange(8))

    def test_fixed_n_dimension(self):
        space = FockSpace.fixed_n(6, 3)
        assert space.dim == math.comb(6, 3)
        assert np.all(np.diff(space.basis) > 0)
        assert all(bin(int(b)).count("1") == 3 for b in space.basis)

    def test_capacity(self):
        with pytest.raises(CapacityError):
            FockSpace.full(15)


class TestSecondQuantize:
    def test_two_site_block_structure(self):
        space = FockSpace.full(2)
        h_mb = second_quantize(TWO_SITE_HOP, space)
        # basis 0, 1=|site0>, 2=|site1>, 3=|both>; hopping acts in N=1 block
        expected = np.zeros((4, 4))
        expected[1, 2] = expected[2, 1] = 1.0
        np.testing.assert_allclose(h_mb, expected, atol=1e-14)

    def test_spectrum_is_subset_sums_of_modes(self):
        # independent oracle: many-body energies = subset sums of eps_alpha
        _, h = chain(6, V=0.8, seed=3)
        d = spectral.diagonalize(h)
        space = FockSpace.full(6)
        h_mb = second_quantize(h, space)
        mb = np.sort(np.linalg.eigvalsh(h_mb))
        sums = sorted(
            sum(d.energies[list(subset)])
            for size in range(7)
            for subset in combinations(range(6), size)
        )
        np.testing.assert_allclose(mb, sums, atol=1e-9)

    def test_number_operator_reads_bit(self):
        space = FockSpace.full(3)
        n1 = number_operator(space, 1)
        np.testing.assert_array_equal(np.diag(n1), (space.basis >> 1) & 1)

    def test_hermitian_with_complex_hoppings(self):
        h_single = np.array([[0.0, 0.3 + 0.4j], [0.3 - 0.4j, 0.2]])
        h_mb = second_quantize(h_single, FockSpace.full(2))
        assert np.max(np.abs(h_mb - h_mb.conj().T)) < 1e-14


class TestEvolveOperator:
    def test_zero_time_identity(self):
        _, h = chain(4)
        space = FockSpace.full(4)
        h_mb = second_quantize(h, space)
        n1 = number_operator(space, 1)
        assert np.max(np.abs(evolve_operator(h_mb, n1, 0.0) - n1)) < 1e-12

    def test_conserved_operator_is_static(self):
        _, h = chain(4, V=1.2)
        space = FockSpace.full(4)
        h_mb = second_quantize(h, space)
        n_total = sum(number_operator(space, k) for k in range(4))
        evolved = evolve_operator(h_mb, n_total, 3.7)
        assert np.max(np.abs(evolved - n_total)) < 1e-10

    def test_two_site_occupancy_oscillates(self):
        # single particle on site 0: <n_0(t)> = cos^2 t
        space = FockSpace.full(2)
        h_mb = second_quantize(TWO_SITE_HOP, space)
        n0 = number_operator(space, 0)
        psi = np.zeros(4)
        psi[space.index[0b01]] = 1.0
        for t in (0.0, 0.4, 1.1, 2.0):
            n_t = evolve_operator(h_mb, n0, t)
            value = (psi @ n_t @ psi).real
            assert value == pytest.approx(math.cos(t) ** 2, abs=1e-10)

    def test_hermiticity_preserved(self):
        _, h = chain(4, V=0.5)
        space = FockSpace.full(4)
        h_mb = second_quantize(h, space)
        o_t = evolve_operator(h_mb, number_operator(space, 2), 1.9)
        assert np.max(np.abs(o_t - o_t.conj().T)) < 1e-10


class TestPartialTrace:
    def test_identity(self):
        space = FockSpace.full(4)
        out = partial_trace_b(np.eye(16), space, n_a=2)
        np.testing.assert_allclose(out, 4.0 * np.eye(4), atol=1e-12)

    def test_local_number_operator(self):
        # Tr_B n_l = d_B * n_l restricted to A, for l inside A
        space = FockSpace.full(4)
        n1 = number_operator(space, 1)
        out = partial_trace_b(n1, space, n_a=2)
        space_a = FockSpace.full(2)
        np.testing.assert_allclose(out, 4.0 * number_operator(space_a, 1), atol=1e-12)

    def test_trace_preserved_on_random_even_operator(self):
        rng = np.random.default_rng(12)
        space = FockSpace.full(4)
        parity = np.array([bin(int(b)).count("1") & 1 for b in space.basis])
        block = rng.standard_normal((16, 16)) + 1j * rng.standard_normal((16, 16))
        block[np.ix_(parity == 0, parity == 1)] = 0
        block[np.ix_(parity == 1, parity == 0)] = 0
        op = block + block.conj().T
        out = partial_trace_b(op, space, n_a=2)
        assert np.trace(out) == pytest.approx(np.trace(op), abs=1e-10)

    def test_odd_parity_rejected(self):
        space = FockSpace.full(2)
        odd = np.zeros((4, 4))
        odd[0, 1] = odd[1, 0] = 1.0  # couples N=0 to N=1
        with pytest.raises(ValueError):
            partial_trace_b(odd, space, n_a=1)


class TestOperatorRenyi:
    def test_initial_value_l8(self):
        _, h = chain(8)
        value = operator_renyi_ed(h, site=1, n_a=4, t=0.0)
        assert value == pytest.approx(3 * math.log(2), abs=1e-10)

    def test_two_site_analytic(self):
        # S(t) = -ln[(1 + cos^4 t)/2]; equals ln 2 at t = pi/2
        for t in (0.0, 0.8, math.pi / 2):
            value = operator_renyi_ed(TWO_SITE_HOP, site=0, n_a=1, t=t)
            assert value == pytest.approx(-math.log((1 + math.cos(t) ** 4) / 2), abs=1e-10)

    def test_capacity(self):
        with pytest.raises(CapacityError):
            operator_renyi_ed(np.eye(12), site=0, n_a=6, t=1.0)


class TestStateEntropies:
    def test_initial_product_state_is_unentangled(self):
        _, h = chain(8)
        s1, s2 = state_entropies_ed(h, np.array([0, 2, 4, 6]), n_a=4, t=0.0)
        assert s1 == pytest.approx(0.0, abs=1e-10)
        assert s2 == pytest.approx(0.0, abs=1e-10)

    def test_reduced_spectrum_matches_schmidt_products(self):
        # cross-module oracle: rho_A spectrum vs correlation-matrix Schmidt values
        from keldysh_entropy import entropy

        spec, h = chain(8, V=0.6, seed=2)
        occ = models.neel_occupation(spec)
        d = spectral.diagonalize(h)
        space = FockSpace.fixed_n(8, 4)
        h_mb = second_quantize(h, space)
        energies, vecs = np.linalg.eigh(h_mb)
        psi0 = np.zeros(space.dim, dtype=complex)
        psi0[space.index[int(np.sum(1 << occ))]] = 1.0
        t = 1.3
        psi_t = vecs @ (np.exp(-1j * energies * t) * (vecs.conj().T @ psi0))
        rho_a = ed_oracle.reduced_density_matrix(psi_t, space, n_a=4)
        rho_spectrum = np.sort(np.linalg.eigvalsh(rho_a))[::-1]

        c = entropy.state_correlation_matrix(d, occ, spec.a_sites(), t)
        schmidt = entropy.schmidt_spectrum(c, k=2**4)
        np.testing.assert_allclose(rho_spectrum, schmidt.top, atol=1e-8)

    def test_wrong_sector_rejected(self):
        _, h = chain(4)
        with pytest.raises(ValueError):
            # three occupied sites cannot sit in the half-filled sector basis
            space = FockSpace.fixed_n(4, 2)
            initial = int(np.sum(1 << np.array([0, 1, 2])))
            assert initial not in space.index
            state_entropies_ed(h, np.array([0, 1, 2]), n_a=2, t=0.0)


class TestDensityMatrixInvariants:
    def test_rho_a_normalized_and_positive(self):
        _, h = chain(8, V=0.9, seed=5)
        occ = np.array([0, 2, 4, 6])
        space = FockSpace.fixed_n(8, 4)
        h_mb = second_quantize(h, space)
        energies, vecs = np.linalg.eigh(h_mb)
        psi0 = np.zeros(space.dim, dtype=complex)
        psi0[space.index[int(np.sum(1 << occ))]] = 1.0
        for t in (0.5, 3.0):
            psi_t = vecs @ (np.exp(-1j * energies * t) * (vecs.conj().T @ psi0))
            rho_a = ed_oracle.reduced_density_matrix(psi_t, space, n_a=4)
            eigs = np.linalg.eigvalsh(rho_a)
            assert np.sum(eigs) == pytest.approx(1.0, abs=1e-10)
            assert eigs.min() > -1e-10

    def test_operator_normalization_is_half_fock_dimension(self):
        space = FockSpace.full(6)
        n3 = number_operator(space, 3)
        assert np.trace(n3) == pytest.approx(2**5)

    def test_operator_density_spectrum_sums_to_one(self):
        _, h = chain(6, V=0.7, seed=1)
        space = FockSpace.full(6)
        h_mb = second_quantize(h, space)
        n2 = number_operator(space, 2)
        o_t = evolve_operator(h_mb, n2, 2.1)
        rho = partial_trace_b(o_t, space, n_a=3) / np.trace(n2)
        assert np.max(np.abs(rho - rho.conj().T)) < 1e-10  # real spectrum
        eigs = np.linalg.eigvalsh(rho)
        assert np.sum(eigs) == pytest.approx(1.0, abs=1e-10)

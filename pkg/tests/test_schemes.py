import numpy as np
import pytest

from blockenc import circuit as qc
from blockenc import families as fam
from blockenc.errors import EncodingTooLarge, NotSymmetric, NoTransposeOracle, PrepIncompatible
from blockenc.estimator import prep_subnormalisation
from blockenc.schemes import (
    AmplificationParams,
    build_base,
    build_hermitian_base,
    build_hermitian_preamplified,
    build_preamplified,
    build_prep_unprep,
    hermitianize,
)
from blockenc.structure import StructureSpec
from blockenc.verify import block_by_resolution_sum, check_encoding, dense_from_structure, extract_block

TD_VALUES = [((-1) ** i) * (1 + i / 7) for i in range(15)]
VARYING = [1.0 if i == 7 else 0.08 * ((-1) ** i) for i in range(15)]


def single_value_spec(value):
    return StructureSpec(
        n=1,
        values=(value,),
        row_map=lambda d, m: 0,
        col_map=lambda d, m: 0,
        in_range=lambda d, m: True,
        m_range=1,
        name="scalar",
    )


class TestBase:
    def test_one_by_one(self):
        enc = build_base(single_value_spec(-0.8))
        assert enc.alpha == pytest.approx(0.8)
        assert extract_block(enc)[0, 0] * enc.alpha == pytest.approx(-0.8, abs=1e-12)

    def test_checkerboard_alpha_scales_with_n(self):
        for n in (2, 4, 8):
            enc = build_base(fam.checkerboard(n, 1.0, -0.5))
            assert enc.alpha == pytest.approx(n * 1.0)

    def test_toeplitz_alpha_and_flags(self):
        enc = build_base(fam.toeplitz(8, 1, [0.5, -1.0, 0.25, 0.75]))
        assert enc.alpha == pytest.approx(4.0)
        assert enc.cost.flag_qubits == 4  # delete + data + two sparsity qubits

    def test_block_matches_dense(self):
        spec = fam.toeplitz(8, 1, [0.5, -1.0, 0.25, 0.75])
        a = dense_from_structure(spec)
        enc = build_base(spec)
        np.testing.assert_allclose(enc.alpha * extract_block(enc), a, atol=1e-9)

    def test_resolution_of_identity_sum(self):
        spec = fam.checkerboard(4, 0.75, -0.5)
        enc = build_base(spec)
        np.testing.assert_allclose(extract_block(enc), block_by_resolution_sum(spec), atol=1e-12)

    def test_dimension_guard(self):
        with pytest.raises(EncodingTooLarge):
            build_base(fam.checkerboard(64, 1.0, 2.0))


class TestHermitianBase:
    def test_tridiagonal_is_hermitian(self):
        enc = build_hermitian_base(fam.tridiagonal(8, TD_VALUES))
        u = enc.unitary
        assert np.abs(u - u.conj().T).max() <= 1e-10
        assert check_encoding(enc, fam.tridiagonal(8, TD_VALUES)).passed

    def test_binary_tree_is_hermitian(self):
        spec = fam.binary_tree(8, 1.0, -2.0, 0.5)
        enc = build_hermitian_base(spec)
        assert np.abs(enc.unitary - enc.unitary.conj().T).max() <= 1e-10
        assert check_encoding(enc, spec).passed

    def test_diagonal_transpose_is_trivially_hermitian(self):
        spec = StructureSpec(
            n=4,
            values=(0.5, -0.25, 0.75, 1.0),
            row_map=lambda d, m: d,
            col_map=lambda d, m: d,
            in_range=lambda d, m: True,
            m_range=1,
            transpose=lambda d, m: (d, m),
            name="diagonal",
        )
        enc = build_hermitian_base(spec)
        assert np.abs(enc.unitary - enc.unitary.conj().T).max() <= 1e-10

    def test_costs_match_base(self):
        spec = fam.tridiagonal(8, TD_VALUES)
        base, herm = build_base(spec), build_hermitian_base(spec)
        assert herm.alpha == base.alpha
        assert herm.cost.data_loading == base.cost.data_loading
        assert herm.cost.flag_qubits == base.cost.flag_qubits

    def test_requires_transpose(self):
        with pytest.raises(NoTransposeOracle):
            build_hermitian_base(fam.toeplitz(8, 1, [1.0, 2.0]))


class TestPrepUnprep:
    def test_checkerboard_alpha(self):
        # (N/2) * (|A0| + |A1|); the N=2 case reduces to |A0| + |A1|
        enc2 = build_prep_unprep(fam.checkerboard(2, 1.0, 1.0))
        assert enc2.alpha == pytest.approx(2.0)
        enc4 = build_prep_unprep(fam.checkerboard(4, 1.0, -0.5))
        assert enc4.alpha == pytest.approx(2 * 1.5)
        assert check_encoding(enc4, fam.checkerboard(4, 1.0, -0.5)).passed

    def test_toeplitz_alpha_is_value_sum(self):
        spec = fam.toeplitz(8, 1, [0.5, -1.0, 0.25, 0.75])
        enc = build_prep_unprep(spec)
        assert enc.alpha == pytest.approx(2.5)
        assert check_encoding(enc, spec).passed

    def test_uniform_values_match_base_alpha(self):
        spec = fam.toeplitz(8, 1, [0.5, -0.5, 0.5, 0.5])
        for p in (0.5, 0.75, 1.0):
            enc = build_prep_unprep(spec, p=p)
            assert enc.alpha == pytest.approx(4 * 0.5)
            assert check_encoding(enc, spec).passed

    def test_general_exponent(self):
        spec = fam.checkerboard(4, 0.9, -0.3)
        enc = build_prep_unprep(spec, p=0.7)
        assert enc.alpha == pytest.approx(prep_subnormalisation([0.9, -0.3], 4, 4, 0.7))
        assert check_encoding(enc, spec).passed
        assert enc.cost.data_loading == 2 * 2  # loads twice away from p=1/2

    def test_flag_count_one_below_base(self):
        spec = fam.checkerboard(8, 1.0, -0.5)
        assert build_prep_unprep(spec).cost.flag_qubits == build_base(spec).cost.flag_qubits - 1

    def test_requires_certificate(self):
        with pytest.raises(PrepIncompatible):
            build_prep_unprep(fam.tridiagonal(4, list(range(1, 8))))

    def test_non_power_of_two_value_count(self):
        import dataclasses

        from blockenc.errors import NotDivisible
        from blockenc.structure import PrepFactor

        spec = dataclasses.replace(
            fam.toeplitz(8, 1, [1.0, -0.5, 0.25]),
            prep_factor=PrepFactor(t_c=lambda d, m: 0, t_r=lambda d, m: 0),
        )
        with pytest.raises(NotDivisible):
            build_prep_unprep(spec)


class TestPreamplified:
    def test_gamma_choice_matches_formula(self):
        spec = fam.tridiagonal(8, VARYING)
        enc = build_preamplified(spec, AmplificationParams(epsilon=1e-3))
        a = dense_from_structure(spec)
        norm = np.abs(a).max()
        col = (np.abs(a) ** 1.0).sum(axis=0).max()  # 2p with p = 1/2
        zeta_max = np.sqrt(col / (3 * norm))
        assert enc.gamma_c == pytest.approx(2 ** (-0.25) / zeta_max, rel=1e-12)

    def test_accuracy_contract(self):
        spec = fam.tridiagonal(8, VARYING)
        eps = 1e-3
        enc = build_preamplified(spec, AmplificationParams(epsilon=eps))
        a = dense_from_structure(spec)
        err = np.abs(enc.alpha * extract_block(enc) - a).max()
        assert enc.gamma_c > 1 and enc.gamma_r > 1
        assert err <= (2 * eps + eps**2) * enc.alpha

    def test_alpha_product_identity(self):
        spec = fam.tridiagonal(8, VARYING)
        enc = build_preamplified(spec)
        base = build_base(spec)
        assert abs(enc.alpha * enc.gamma_c * enc.gamma_r - base.alpha) <= 1e-12

    def test_uniform_matrix_falls_back(self):
        enc = build_preamplified(fam.checkerboard(4, 1.0, 1.0))
        assert enc.gamma_c == 1.0 and enc.gamma_r == 1.0
        # exact encoding in the fallback
        a = dense_from_structure(fam.checkerboard(4, 1.0, 1.0))
        np.testing.assert_allclose(enc.alpha * extract_block(enc), a, atol=1e-9)

    def test_flag_bookkeeping(self):
        enc = build_preamplified(fam.tridiagonal(8, VARYING))
        assert enc.cost.flag_qubits == 5 + 2  # padded sparsity register has two qubits


    def test_block_bound_across_families(self):
        rng = np.random.default_rng(21)
        eps = 1e-3
        specs = [
            fam.checkerboard(8, 1.0, 0.05),
            fam.toeplitz(8, 1, [1.0, 0.06, -0.08, 0.05]),
            fam.tridiagonal(8, VARYING),
            fam.binary_tree(8, 1.0, 0.07, -0.06),
        ]
        for spec in specs:
            enc = build_preamplified(spec, AmplificationParams(epsilon=eps))
            a = dense_from_structure(spec)
            err = np.abs(enc.alpha * extract_block(enc) - a).max()
            assert err <= (2 * eps + eps**2) * enc.alpha, spec.name


class TestHermitianPreamplified:
    def test_hermitian_and_accurate(self):
        spec = fam.tridiagonal(8, VARYING)
        eps = 1e-3
        enc = build_hermitian_preamplified(spec, AmplificationParams(epsilon=eps))
        assert np.abs(enc.unitary - enc.unitary.conj().T).max() <= 1e-10
        a = dense_from_structure(spec)
        assert np.abs(enc.alpha * extract_block(enc) - a).max() <= (2 * eps + eps**2) * enc.alpha

    def test_sign_oracle_costs_extra_loading(self):
        spec = fam.tridiagonal(8, VARYING)
        plain = build_preamplified(spec)
        herm = build_hermitian_preamplified(spec)
        assert herm.cost.data_loading == pytest.approx(plain.cost.data_loading + len(spec.values))

    def test_rejects_p_away_from_half(self):
        with pytest.raises(ValueError):
            build_hermitian_preamplified(fam.tridiagonal(4, list(range(1, 8))), AmplificationParams(p=0.6))


class TestHermitianize:
    def test_wraps_base_tridiagonal(self):
        spec = fam.tridiagonal(8, TD_VALUES)
        inner = build_base(spec)
        enc = hermitianize(inner)
        assert np.abs(enc.unitary - enc.unitary.conj().T).max() <= 1e-10
        np.testing.assert_allclose(extract_block(enc), extract_block(inner), atol=1e-12)
        assert enc.alpha == inner.alpha
        assert enc.cost.flag_qubits == inner.cost.flag_qubits + 1
        assert enc.cost.data_loading == 2 * inner.cost.data_loading

    def test_nested_application(self):
        spec = fam.checkerboard(4, 1.0, -0.5)
        enc = hermitianize(hermitianize(build_base(spec)))
        assert check_encoding(enc, spec).passed
        assert enc.cost.flag_qubits == build_base(spec).cost.flag_qubits + 2

    def test_rejects_asymmetric(self):
        with pytest.raises(NotSymmetric):
            hermitianize(build_base(fam.toeplitz(8, 1, [0.5, -1.0, 0.25, 0.75])))


class TestSubnormalisationOrdering:
    def test_callebaut_interpolates_prep_exponents(self):
        rng = np.random.default_rng(11)
        for _ in range(100):
            d = rng.integers(2, 17)
            vals = rng.uniform(0.05, 1.0, d) * rng.choice([-1.0, 1.0], d)
            ps = sorted(rng.uniform(0.5, 1.0, 3))
            alphas = [prep_subnormalisation(vals, d, d, p) for p in [0.5] + ps]
            for lo, hi in zip(alphas, alphas[1:]):
                assert lo <= hi + 1e-12
            if np.unique(np.abs(vals)).size > 1 and ps[0] > 0.5:
                assert alphas[0] < alphas[1]

    def test_prep_never_exceeds_base(self):
        rng = np.random.default_rng(5)
        for _ in range(50):
            d = int(rng.integers(1, 12))
            vals = rng.uniform(0.05, 1.0, d) * rng.choice([-1.0, 1.0], d)
            base = d * np.abs(vals).max()  # sqrt(S_c S_r) ||A||_max with S = D
            for p in rng.uniform(0, 1, 3):
                assert prep_subnormalisation(vals, d, d, p) <= base + 1e-12


def test_checkerboard_base_matches_hand_built_circuit():
    """The compact hand construction: Hadamards, one swap, one CNOT.

    j splits into (j_hi, j_lo); the swap moves j_hi into the superposed low
    register and the CNOT adds the value index onto j_lo.  The resulting
    block must match the dense matrix at the base subnormalisation.
    """
    n = 4
    a0, a1 = 0.8, -0.35
    spec = fam.checkerboard(n, a0, a1)
    layout = qc.layout_of(("data", 2), ("g", 2), ("hlo", n // 2), ("jhi", n // 2), ("jlo", 2))
    h_n = np.kron(qc.hadamard(), qc.hadamard())
    rot = qc.multiplexed_rotation([a0, a1], max(abs(a0), abs(a1)))
    u = qc.compose(
        layout,
        [
            (h_n, ("g", "hlo")),
            (qc.SWAP_2Q, ("hlo", "jhi")),
            (qc.PAULI_X, ("jlo",), ("g", 1)),
            (rot, ("data", "g")),
            (h_n.conj().T, ("g", "hlo")),
        ],
    )
    b = u[:n, :n].real  # flags (data, g, hlo) zero; (jhi, jlo) is the block index
    generic = extract_block(build_base(spec))
    np.testing.assert_allclose(n * max(abs(a0), abs(a1)) * b, dense_from_structure(spec), atol=1e-9)
    np.testing.assert_allclose(b, generic, atol=1e-12)

import numpy as np
import pytest

from blockenc import families as fam
from blockenc.errors import BadFamilyParameter
from blockenc.schemes import build_base
from blockenc.structure import derive_counts
from blockenc.verify import check_encoding, dense_from_structure, extract_block


class TestCheckerboard:
    def test_n4_labelling_matches_printed_table(self):
        spec = fam.checkerboard(4, 1.0, 2.0)
        # (d, m) per entry, row-major
        printed = {
            (0, 0): (0, 0), (0, 1): (1, 0), (0, 2): (0, 1), (0, 3): (1, 1),
            (1, 0): (1, 2), (1, 1): (0, 2), (1, 2): (1, 3), (1, 3): (0, 3),
            (2, 0): (0, 4), (2, 1): (1, 4), (2, 2): (0, 5), (2, 3): (1, 5),
            (3, 0): (1, 6), (3, 1): (0, 6), (3, 2): (1, 7), (3, 3): (0, 7),
        }
        labelled = {(i, j): (d, m) for d, m, i, j in spec.labels()}
        assert labelled == printed

    def test_dense_is_parity_pattern(self):
        a = dense_from_structure(fam.checkerboard(8, 3.0, -1.0))
        for i in range(8):
            for j in range(8):
                assert a[i, j] == (3.0 if (i + j) % 2 == 0 else -1.0)

    def test_factorisation_into_projectors_and_flip(self):
        for n in (4, 8, 16):
            a0, a1 = 0.7, -0.2
            dense = dense_from_structure(fam.checkerboard(n, a0, a1))
            ones = np.ones((n // 2, n // 2))
            b = np.array([[a0, a1], [a1, a0]])
            np.testing.assert_allclose(dense, np.kron(ones, b), atol=1e-12)
            # the all-ones block is the plus-projector chain times its trace
            plus = np.full((2, 2), 0.5)
            chain = np.array([[1.0]])
            for _ in range(int(np.log2(n)) - 1):
                chain = np.kron(chain, plus)
            np.testing.assert_allclose(dense, (n / 2) * np.kron(chain, b), atol=1e-12)

    def test_zero_corners(self):
        a = dense_from_structure(fam.checkerboard(4, 1.0, 2.0, zero_corners=True))
        assert a[0, 0] == 0.0 and a[3, 3] == 0.0
        assert np.count_nonzero(a) == 14


class TestToeplitz:
    def test_band_entries(self):
        spec = fam.toeplitz(8, 1, [0.5, -1.0, 0.25, 0.75])
        a = dense_from_structure(spec)
        assert a[0, 0] == -1.0  # value index 1 on the main diagonal
        assert a[0, 1] == 0.5  # value index 0 above
        assert a[1, 0] == 0.25  # value index 2 below
        assert a[2, 0] == 0.75  # value index 3 two below

    def test_circulant_every_value_once_per_column(self):
        spec = fam.toeplitz(4, 0, [1.0, 2.0, 3.0, 4.0], circulant=True)
        a = dense_from_structure(spec)
        for j in range(4):
            assert sorted(a[:, j]) == [1.0, 2.0, 3.0, 4.0]
        assert derive_counts(spec).M == 4

    def test_diagonal_only(self):
        a = dense_from_structure(fam.toeplitz(4, 0, [2.5]))
        np.testing.assert_array_equal(a, 2.5 * np.eye(4))

    def test_merged_circuit_matches_generic_block(self):
        values = [0.5, -1.0, 0.25, 0.75]
        spec = fam.toeplitz(8, 1, values)
        merged = fam.toeplitz_merged_encoding(8, 1, values)
        generic = build_base(spec)
        assert merged.alpha == generic.alpha
        np.testing.assert_allclose(extract_block(merged), extract_block(generic), atol=1e-12)

    def test_parameter_validation(self):
        with pytest.raises(BadFamilyParameter):
            fam.toeplitz(8, 5, [1.0, 2.0])
        with pytest.raises(BadFamilyParameter):
            fam.toeplitz(6, 0, [1.0])


class TestTridiagonal:
    VALUES = [((-1) ** i) * (i + 1.0) for i in range(15)]

    def test_labelling_pattern(self):
        spec = fam.tridiagonal(8, self.VALUES)
        labelled = {(i, j): (d, m) for d, m, i, j in spec.labels()}
        assert labelled[0, 0] == (0, 0)
        assert labelled[0, 1] == (1, 0)
        assert labelled[1, 0] == (1, 1)
        assert labelled[1, 1] == (2, 0)
        assert labelled[7, 7] == (14, 0)

    def test_dense_symmetric_tridiagonal(self):
        a = dense_from_structure(fam.tridiagonal(8, self.VALUES))
        np.testing.assert_array_equal(a, a.T)
        assert np.count_nonzero(a - np.diag(np.diag(a))) == 14
        np.testing.assert_array_equal(np.diag(a), self.VALUES[0::2])

    def test_compact_circuit_plain_and_hermitian(self):
        spec = fam.tridiagonal(8, self.VALUES)
        for herm in (False, True):
            enc = fam.tridiagonal_compact_encoding(8, self.VALUES, hermitian=herm)
            rep = check_encoding(enc, spec)
            assert rep.passed
            if herm:
                assert rep.hermiticity_defect <= 1e-10
        # compact and generic pipelines encode the same block
        np.testing.assert_allclose(
            extract_block(fam.tridiagonal_compact_encoding(8, self.VALUES)),
            extract_block(build_base(spec)) * build_base(spec).alpha / 3.0 / np.abs(self.VALUES).max(),
            atol=1e-12,
        )


class TestBinaryTree:
    def test_printed_adjacency_matrix(self):
        a0, a1, a2 = 1.0, 2.0, 3.0
        a = dense_from_structure(fam.binary_tree(8, a0, a1, a2))
        expected = np.array(
            [
                [a0, a2, 0, 0, 0, 0, 0, 0],
                [a2, a1, a2, a2, 0, 0, 0, 0],
                [0, a2, a1, 0, a2, a2, 0, 0],
                [0, a2, 0, a1, 0, 0, a2, a2],
                [0, 0, a2, 0, a0, 0, 0, 0],
                [0, 0, a2, 0, 0, a0, 0, 0],
                [0, 0, 0, a2, 0, 0, a0, 0],
                [0, 0, 0, a2, 0, 0, 0, a0],
            ]
        )
        np.testing.assert_array_equal(a, expected)

    def test_row_sums_count_tree_degree(self):
        a0, a1, a2 = 1.0, 2.0, 3.0
        a = dense_from_structure(fam.binary_tree(8, a0, a1, a2))
        assert a[0].sum() == a0 + a2  # root: one child edge
        assert a[1].sum() == a1 + 3 * a2  # internal: parent + two children

    def test_row_enumeration_matches_printed_matrix(self):
        spec = fam.binary_tree(8, 1.0, 2.0, 3.0)
        printed = np.array(
            [
                [0, 3, -1, -1, -1, -1, -1, -1],
                [1, 0, 2, 3, -1, -1, -1, -1],
                [-1, 1, 0, -1, 2, 3, -1, -1],
                [-1, 1, -1, 0, -1, -1, 2, 3],
                [-1, -1, 1, -1, 0, -1, -1, -1],
                [-1, -1, 1, -1, -1, 0, -1, -1],
                [-1, -1, -1, 1, -1, -1, 0, -1],
                [-1, -1, -1, 1, -1, -1, -1, 0],
            ]
        )
        got = np.full((8, 8), -1)
        for d, m, i, j in spec.labels():
            got[i, j] = spec.row_rank(d, m)
        np.testing.assert_array_equal(got, printed)

    def test_minimum_size(self):
        with pytest.raises(BadFamilyParameter):
            fam.binary_tree(4, 1.0, 2.0, 3.0)


class TestDenseAgainstDirectConstructors:
    """The two routes write the same doubles, bit for bit."""

    def test_all_families(self):
        rng = np.random.default_rng(17)
        cases = []
        for n in (4, 8, 16, 32):
            v = rng.uniform(-1, 1, 2)
            cases.append((fam.checkerboard(n, *v), fam.checkerboard_dense(n, *v)))
            v = rng.uniform(-1, 1, 2)
            cases.append(
                (
                    fam.checkerboard(n, *v, zero_corners=True),
                    fam.checkerboard_dense(n, *v, zero_corners=True),
                )
            )
            v = rng.uniform(-1, 1, 4)
            cases.append((fam.toeplitz(n, 1, v), fam.toeplitz_dense(n, 1, v)))
            cases.append((fam.toeplitz(n, 2, v, circulant=True), fam.toeplitz_dense(n, 2, v, circulant=True)))
            v = rng.uniform(-1, 1, 2 * n - 1)
            cases.append((fam.tridiagonal(n, v), fam.tridiagonal_dense(n, v)))
            if n >= 8:
                v = rng.uniform(-1, 1, 3)
                cases.append((fam.binary_tree(n, *v), fam.binary_tree_dense(n, *v)))
        for spec, direct in cases:
            assert np.array_equal(dense_from_structure(spec), direct), spec.name


class TestJson:
    def test_round_trip_families(self):
        spec = fam.spec_from_json({"family": "toeplitz", "n": 8, "values": [1, 2], "k": 1})
        assert spec.name == "toeplitz" and spec.n == 8

    def test_unknown_family(self):
        with pytest.raises(BadFamilyParameter):
            fam.spec_from_json({"family": "hankel", "n": 4, "values": [1]})

    def test_missing_keys(self):
        with pytest.raises(BadFamilyParameter):
            fam.spec_from_json({"family": "checkerboard", "n": 4})

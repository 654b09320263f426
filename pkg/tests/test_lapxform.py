import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from treelap.harness.verify import random_symmetric_int
from treelap.lapxform import (SignClass, build_S, build_T, compress, compress_vector, distance_laplacian,
                              e1, laplacian_of, lift_vector, ones, sign_pattern)
from treelap.matcore import sym_from_entries
from treelap.treegraph import adjacency_matrix, distance_matrix, path_graph, random_tree


class TestLaplacian:
    def test_single_edge(self):
        L = laplacian_of(sym_from_entries([[0, 1], [1, 0]]))
        np.testing.assert_array_equal(L.matrix.data, [[1, -1], [-1, 1]])
        assert L.exact

    def test_p3_distance(self, p3):
        np.testing.assert_array_equal(distance_laplacian(p3).matrix.data,
                                      [[3, -1, -2], [-1, 2, -1], [-2, -1, 3]])

    def test_diagonal_ignored(self):
        a = laplacian_of(sym_from_entries([[5, 1], [1, 7]]))
        b = laplacian_of(sym_from_entries([[0, 1], [1, 0]]))
        np.testing.assert_array_equal(a.matrix.data, b.matrix.data)

    @settings(max_examples=50, deadline=None)
    @given(st.integers(1, 20), st.integers(0, 2**32))
    def test_row_sums_vanish(self, n, seed):
        A = random_symmetric_int(n, seed)
        L = laplacian_of(A).matrix.data
        assert np.all(L.sum(axis=1) == 0)
        off = ~np.eye(n, dtype=bool)
        np.testing.assert_array_equal(L[off], -A.data[off])
        np.testing.assert_array_equal(L @ ones(n), np.zeros(n))

    def test_float_row_sums(self):
        r = np.random.default_rng(5)
        a = r.uniform(0, 1, (9, 9))
        L = laplacian_of(sym_from_entries(a + a.T)).matrix.data
        assert np.max(np.abs(L.sum(axis=1))) <= 1e-10 * np.abs(L).max()


class TestSandT:
    def test_n3_displayed(self):
        np.testing.assert_array_equal(build_S(3), [[-1, 1, 0], [0, -1, 1]])
        np.testing.assert_array_equal(build_T(3), [[0, 0], [1, 0], [1, 1]])
        np.testing.assert_array_equal(build_S(3) @ build_T(3), np.eye(2, dtype=int))
        np.testing.assert_array_equal(build_T(3) @ build_S(3), [[0, 0, 0], [-1, 1, 0], [-1, 0, 1]])

    @pytest.mark.parametrize("n", [2, 3, 17, 64, 128])
    def test_identities_exact(self, n):
        S, T = build_S(n), build_T(n)
        assert S.dtype == np.int64 and T.dtype == np.int64
        np.testing.assert_array_equal(S @ T, np.eye(n - 1, dtype=np.int64))
        np.testing.assert_array_equal(T @ S, np.eye(n, dtype=np.int64) - np.outer(ones(n), e1(n)))

    @pytest.mark.parametrize("n", [0, 1])
    def test_too_small(self, n):
        with pytest.raises(ValueError):
            build_S(n)
        with pytest.raises(ValueError):
            build_T(n)


class TestCompress:
    def test_p3_distance(self, p3):
        M = compress(distance_laplacian(p3))
        np.testing.assert_array_equal(M, [[4, 1], [1, 4]])
        assert np.issubdtype(M.dtype, np.integer)
        np.testing.assert_allclose(sorted(np.linalg.eigvals(M).real), [3, 5])

    def test_p3_adjacency(self, p3):
        np.testing.assert_array_equal(compress(laplacian_of(adjacency_matrix(p3))), [[2, -1], [-1, 2]])

    @settings(max_examples=40, deadline=None)
    @given(st.integers(2, 25), st.integers(0, 2**32))
    def test_matches_dense_product(self, n, seed):
        L = laplacian_of(random_symmetric_int(n, seed))
        ref = build_S(n) @ L.matrix.data @ build_T(n)
        np.testing.assert_array_equal(compress(L), ref)

    @settings(max_examples=30, deadline=None)
    @given(st.integers(2, 30), st.integers(0, 2**32))
    def test_spectrum_drops_one_zero(self, n, seed):
        L = laplacian_of(random_symmetric_int(n, seed))
        lam = np.linalg.eigvalsh(L.matrix.as_float())
        mu = np.sort(np.linalg.eigvals(compress(L).astype(float)).real)
        scale = max(1.0, np.abs(lam).max())
        # remove the zero eigenvalue closest to 0
        lam = np.delete(lam, np.argmin(np.abs(lam)))
        np.testing.assert_allclose(mu, lam, atol=1e-8 * scale)

    @settings(max_examples=30, deadline=None)
    @given(st.integers(2, 30), st.integers(0, 2**32))
    def test_eigenvectors_map_both_ways(self, n, seed):
        L = laplacian_of(random_symmetric_int(n, seed))
        lap = L.matrix.as_float()
        M = compress(L).astype(float)
        scale = max(1.0, np.abs(lap).sum(axis=1).max())
        w, V = np.linalg.eigh(lap)
        for a, y in zip(w, V.T):
            if abs(y.sum()) > 1e-6:
                continue
            z = compress_vector(y)
            assert np.max(np.abs(M @ z - a * z)) <= 1e-8 * scale
        mu, Y = np.linalg.eig(M)
        for a, y in zip(mu.real, Y.T.real):
            x = lift_vector(y)
            assert abs(x.sum()) <= 1e-10 * max(1, np.abs(x).max())
            np.testing.assert_allclose(compress_vector(x), y, atol=1e-12)
            assert np.max(np.abs(lap @ x - a * x)) <= 1e-8 * scale * max(1, np.abs(x).max())


class TestVectors:
    def test_compress_vector(self):
        np.testing.assert_array_equal(compress_vector([-1, 0, 1]), [1, 1])
        np.testing.assert_array_equal(compress_vector([4, 4, 4, 4]), [0, 0, 0])
        np.testing.assert_array_equal(compress_vector([0, 1, 3]), [1, 2])

    def test_lift_vector(self):
        np.testing.assert_allclose(lift_vector([1, 1]), [-1, 0, 1])
        np.testing.assert_array_equal(lift_vector([0, 0]), [0, 0, 0])

    @settings(max_examples=50)
    @given(st.lists(st.floats(-100, 100), min_size=1, max_size=49))
    def test_round_trip(self, y):
        x = lift_vector(y)
        np.testing.assert_allclose(compress_vector(x), y, atol=1e-9)
        assert abs(x.sum()) <= 1e-9 * max(1.0, np.abs(x).max()) * len(x)


class TestSignPattern:
    def test_examples(self):
        assert sign_pattern(np.array([[4, 1], [1, 4]])).classification is SignClass.ALL_POSITIVE
        assert sign_pattern(np.array([[2, -1], [-1, 2]])).classification is SignClass.ALL_NEGATIVE
        p = sign_pattern(np.array([[0, 1], [-1, 0]]))
        assert p.classification is SignClass.MIXED and p.witness == (2, 1)

    def test_weak_classes(self):
        assert sign_pattern(np.array([[0, 1, 0], [2, 0, 1], [0, 3, 0]])).classification is SignClass.ALL_NONNEG
        assert sign_pattern(np.array([[0, -1, 0], [0, 0, -1], [-1, 0, 0]])).classification is SignClass.ALL_NONPOS

    def test_float_threshold(self):
        m = np.array([[1.0, 1e-14], [-1e-14, 1.0]]) * 1.0
        m[0, 0] = 100.0
        p = sign_pattern(m)
        assert p.all_zero and p.classification is SignClass.ALL_NONNEG

    def test_integer_and_float_agree(self):
        r = np.random.default_rng(3)
        for _ in range(50):
            m = r.integers(-2, 3, (5, 5))
            assert sign_pattern(m) == sign_pattern(m.astype(float))

    def test_vacuous_and_satisfies(self):
        p = sign_pattern(np.array([[7]]))
        assert p.vacuous and p.satisfies(SignClass.ALL_NEGATIVE)
        q = sign_pattern(np.eye(3, dtype=int))
        assert q.all_zero and q.satisfies(SignClass.ALL_NONPOS) and not q.satisfies(SignClass.ALL_POSITIVE)
        assert sign_pattern(np.array([[0, 1], [1, 0]])).satisfies(SignClass.ALL_NONNEG)

    def test_distance_matrices_of_paths_compress_positive(self):
        for n in range(3, 40):
            M = compress(distance_laplacian(path_graph(n)))
            assert sign_pattern(M).classification is SignClass.ALL_POSITIVE

    def test_tree_distance_compression_not_sign_definite_in_general(self):
        # off paths the vertex order carries no structure; Mixed appears
        seen = {sign_pattern(compress(laplacian_of(distance_matrix(random_tree(8, s))))).classification
                for s in range(40)}
        assert SignClass.MIXED in seen

import numpy as np
import pytest
from scipy import stats

from entangled_bh.errors import ModelError
from entangled_bh.haar import (
    SeededStream,
    haar_isometries,
    haar_sequence,
    partial_swap_operator,
    sample_haar,
    sample_haar_isometry,
    swap_operator,
    twirl_swap_coefficients,
    twirled_swap_mc,
)


def test_dim_one_is_a_phase():
    u = sample_haar(1, SeededStream(5, 0)).matrix
    assert u.shape == (1, 1)
    assert abs(abs(u[0, 0]) - 1) < 1e-12


@pytest.mark.parametrize("dim", [2, 3, 8, 17])
def test_unitarity(dim):
    for j in range(5):
        u = sample_haar(dim, SeededStream(99, j)).matrix
        assert np.abs(u.conj().T @ u - np.eye(dim)).max() < 1e-10


def test_determinism_and_stream_independence():
    a = sample_haar(6, SeededStream(123, 7)).matrix
    b = sample_haar(6, SeededStream(123, 7)).matrix
    c = sample_haar(6, SeededStream(123, 8)).matrix
    d = sample_haar(6, SeededStream(124, 7)).matrix
    assert a.tobytes() == b.tobytes()
    assert not np.allclose(a, c)
    assert not np.allclose(a, d)


def test_task_stream_index():
    s = SeededStream.for_task(1, 3, 5)
    assert s.stream_index == 3 * 2**32 + 5
    with pytest.raises(ModelError):
        SeededStream(-1, 0)
    with pytest.raises(ModelError):
        SeededStream(0, -1)


def test_sequence_and_isometry_agree_with_first_draw():
    s = SeededStream(42, 1)
    u = sample_haar(8, s).matrix
    first = next(haar_sequence(8, s, 3)).matrix
    assert first.tobytes() == u.tobytes()
    np.testing.assert_allclose(sample_haar_isometry(8, 3, s), u[:, :3], atol=1e-13)
    seq = [v.matrix for v in haar_sequence(8, s, 3)]
    assert not np.allclose(seq[0], seq[1])


def test_phase_fix_gives_positive_triangular_factor():
    # G = U R with R upper triangular and positive diagonal
    rng = np.random.default_rng(0)
    from entangled_bh.haar import ginibre, _phase_fixed_qr

    g = ginibre(rng, 5, 5, 10)
    u = _phase_fixed_qr(g)
    r = np.conj(np.swapaxes(u, 1, 2)) @ g
    d = np.diagonal(r, axis1=1, axis2=2)
    assert np.all(d.real > 0)
    assert np.abs(d.imag).max() < 1e-12
    assert np.abs(np.tril(r, -1)).max() < 1e-12


def test_first_moment_against_gaussian_vector_oracle():
    # a Haar column is a normalized complex Gaussian vector
    n = 10**5
    u = haar_isometries(4, 4, n, SeededStream(2024, 0).generator())
    x = np.abs(u[:, 0, 0]) ** 2
    rng = np.random.default_rng(77)
    v = rng.standard_normal((n, 4)) + 1j * rng.standard_normal((n, 4))
    y = np.abs(v[:, 0]) ** 2 / np.sum(np.abs(v) ** 2, axis=1)
    se_x = x.std(ddof=1) / np.sqrt(n)
    se_y = y.std(ddof=1) / np.sqrt(n)
    assert abs(x.mean() - 0.25) < 4 * se_x
    assert abs(y.mean() - 0.25) < 4 * se_y
    assert abs(x.mean() - y.mean()) < 4 * np.hypot(se_x, se_y)


def test_entry_weights_uniform_chi_square():
    # the largest |U_ij|^2 falls in each of the 16 cells equally often
    n = 10**4
    u = haar_isometries(4, 4, n, SeededStream(31337, 0).generator())
    cells = np.argmax(np.abs(u.reshape(n, 16)) ** 2, axis=1)
    counts = np.bincount(cells, minlength=16)
    assert stats.chisquare(counts).pvalue > 0.01
    rows = np.abs(u) ** 2
    np.testing.assert_allclose(rows.mean(axis=0), 0.25, atol=4 * rows.std() / np.sqrt(n))


# -- twirl ------------------------------------------------------------------------------


@pytest.mark.parametrize("a1,a2", [(1, 2), (2, 1), (2, 2), (1, 4), (4, 1), (2, 4), (3, 5)])
def test_coefficients_solve_trace_conditions(a1, a2):
    # alpha I + beta S is fixed by tr(.) and tr(S .)
    a = a1 * a2
    lhs = np.array([[a * a, a], [a, a * a]], dtype=float)
    rhs = np.array([a1 * a1 * a2, a1 * a2 * a2], dtype=float)
    alpha, beta = np.linalg.solve(lhs, rhs)
    c = twirl_swap_coefficients(a1, a2)
    assert abs(c.alpha - alpha) < 1e-12
    assert abs(c.beta - beta) < 1e-12


def test_coefficient_limits():
    assert (twirl_swap_coefficients(5, 1).alpha, twirl_swap_coefficients(5, 1).beta) == (1.0, 0.0)
    assert (twirl_swap_coefficients(1, 5).alpha, twirl_swap_coefficients(1, 5).beta) == (0.0, 1.0)
    c = twirl_swap_coefficients(2, 2)
    assert abs(c.alpha - 0.4) < 1e-15 and abs(c.beta - 0.4) < 1e-15
    with pytest.raises(ModelError):
        twirl_swap_coefficients(1, 1)


def test_partial_swap_limits():
    np.testing.assert_array_equal(partial_swap_operator(1, 3), swap_operator(3))
    np.testing.assert_array_equal(partial_swap_operator(3, 1), np.eye(9))
    s = partial_swap_operator(2, 2)
    np.testing.assert_array_equal(s @ s, np.eye(16))


def test_single_sample_is_the_conjugated_swap():
    stream = SeededStream(8, 0)
    u = sample_haar(4, stream).matrix
    uu = np.kron(u, u)
    exact = uu.conj().T @ partial_swap_operator(2, 2) @ uu
    np.testing.assert_allclose(twirled_swap_mc(2, 2, 1, stream), exact, atol=1e-13)


def test_full_swap_and_identity_are_invariant():
    s = SeededStream(9, 0)
    np.testing.assert_allclose(twirled_swap_mc(1, 4, 7, s), swap_operator(4), atol=1e-13)
    np.testing.assert_allclose(twirled_swap_mc(4, 1, 7, s), np.eye(16), atol=1e-13)


def test_two_by_two_twirl_and_trace():
    mc = twirled_swap_mc(2, 2, 10**4, SeededStream(5150, 0))
    exact = twirl_swap_coefficients(2, 2).operator()
    assert np.linalg.norm(mc - exact) < 0.05
    # every draw has trace A1^2 A2, so the mean does too
    assert abs(np.trace(mc).real - 8) < 1e-9
    assert abs(np.trace(exact) - 8) < 1e-12

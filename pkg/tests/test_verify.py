import dataclasses

import numpy as np
import pytest

from entangled_bh.analytics import GROUPS, purity_table
from entangled_bh.errors import BudgetError, ModelError
from entangled_bh.haar import haar_isometries
from entangled_bh.verify import (
    RunningStats,
    batch_purities,
    check_points,
    decoder_grid,
    decoupling_distances,
    desk_grid,
    group_purities,
    purity_complement_gap,
    sample_states,
    verify_decoder,
    verify_decoupling,
    verify_purities,
    verify_twirl,
)


def test_running_stats_merge():
    rng = np.random.default_rng(0)
    x = rng.standard_normal((300, 3))
    a, b, whole = RunningStats(), RunningStats(), RunningStats()
    a.add(x[:100])
    b.add(x[100:])
    whole.add(x)
    merged = a.merge(b)
    assert merged.count == 300
    np.testing.assert_allclose(merged.mean, x.mean(axis=0), atol=1e-14)
    np.testing.assert_allclose(merged.se, x.std(axis=0, ddof=1) / np.sqrt(300), atol=1e-14)
    np.testing.assert_allclose(whole.se, merged.se, atol=1e-14)


def test_desk_grid_shape():
    g = desk_grid()
    assert len(g) == 979
    assert sum(1 for p in g if sum(p) == 12) == 252
    assert all(p[0] + p[1] <= p[2] + p[3] and p[2] + p[3] >= 1 and sum(p) <= 12 for p in g)
    assert (1, 1, 1, 2) in g


def test_check_points():
    with pytest.raises(ModelError):
        check_points([(3, 0, 1, 1)])
    with pytest.raises(ModelError):
        check_points([(0, 0, 0, 0)])


@pytest.mark.parametrize("n,m", [(5, 3), (4, 4), (6, 0), (3, 1), (2, 2)])
def test_fast_purities_match_reference(n, m):
    rng = np.random.default_rng(n * 10 + m)
    count = 12
    q = haar_isometries(2**n, 2**m, count, rng)
    pts = [(k, m - k, r, n - r) for k in range(m + 1) for r in range(n + 1)]
    fast = batch_purities(q, pts)
    for k, nu, r, b in pts:
        psi = q.reshape(count, 2**r, 2**b, 2**k, 2**nu).transpose(0, 3, 1, 2, 4) / np.sqrt(2**m)
        np.testing.assert_allclose(fast[(k, nu, r, b)], group_purities(psi), atol=1e-13)


def test_sampled_states_are_pure_with_equal_complements():
    psi = sample_states(1, 1, 2, 1, 50, np.random.default_rng(3))
    assert psi.shape == (50, 2, 4, 2, 2)
    np.testing.assert_allclose(np.sum(np.abs(psi) ** 2, axis=(1, 2, 3, 4)), 1, atol=1e-12)
    assert purity_complement_gap(psi) < 1e-10


def test_eleven_over_twentyone_point():
    rep = verify_purities([(1, 1, 1, 2)], 10**4, 11)
    check = next(c for c in rep.checks if c.group == "R")
    assert abs(check.analytic - 0.523810) < 1e-6
    assert check.passed and rep.passed
    assert len(rep.checks) == len(GROUPS)


def test_zero_radiation_point_is_exact():
    rep = verify_purities([(1, 0, 0, 2)], 500, 11)
    check = next(c for c in rep.checks if c.group == "R")
    assert check.analytic == 1.0
    assert abs(check.mc_mean - 1) < 1e-12 and check.se < 1e-12
    assert check.passed


def test_negative_control_reports_failure():
    def corrupted(k, nu, r, b):
        t = purity_table(k, nu, r, b)
        return dataclasses.replace(t, R=t.R + 0.05)

    rep = verify_purities([(1, 1, 1, 2), (0, 1, 2, 2)], 2000, 1, analytic=corrupted)
    assert not rep.passed
    assert {c.group for c in rep.failures()} == {"R"}


def test_report_is_independent_of_grid_membership():
    a = verify_purities([(1, 1, 1, 2)], 3000, 5)
    b = verify_purities([(0, 2, 3, 0), (1, 1, 1, 2), (2, 0, 2, 1)], 3000, 5)
    pick = [c.as_dict() for c in b.checks if c.point == (1, 1, 1, 2)]
    assert [c.as_dict() for c in a.checks] == pick


def test_entropy_below_log_purity_bound():
    rep = verify_purities([(1, 1, 2, 1), (0, 2, 1, 3)], 2000, 9, entropies=True)
    assert rep.passed
    for c in rep.checks:
        assert c.entropy_mean >= -np.log2(c.mc_mean) - 4 * c.entropy_se - 1e-10


def test_purity_budget():
    with pytest.raises(BudgetError):
        verify_purities([(1, 1, 6, 5)], 10, 0)


# -- decoupling ------------------------------------------------------------------------


def test_decoupling_example_point():
    rep = verify_decoupling([(1, 2, 2, 1)], 10**4, 3)
    by_role = {c.a1: c for c in rep.checks}
    assert abs(by_role["R"].rhs - 0.3125) < 1e-15
    assert by_role["R"].squared_mean <= 0.3125
    assert rep.passed


def test_no_reference_decouples_exactly():
    psi = sample_states(0, 1, 2, 2, 200, np.random.default_rng(4))
    assert decoupling_distances(psi, 3).max() < 1e-12
    assert decoupling_distances(psi, 2).max() < 1e-12


def test_reduced_basis_path_matches_direct():
    # A2 = 16 exceeds K * A1 * N = 8, so the reduced basis is used
    psi = sample_states(1, 1, 1, 4, 20, np.random.default_rng(8))
    fast = decoupling_distances(psi, 3)
    for s in range(20):
        m = np.transpose(psi[s], (0, 2, 1, 3)).reshape(2 * 16, -1)
        sigma = m @ m.conj().T
        s_b = np.einsum("kacx,kbcx->ab", psi[s].transpose(0, 2, 1, 3), psi[s].transpose(0, 2, 1, 3).conj())
        diff = sigma - np.kron(np.eye(2) / 2, s_b)
        assert abs(fast[s] - np.abs(np.linalg.eigvalsh(diff)).sum()) < 1e-12


def test_vacuous_roles_flagged():
    rep = verify_decoupling([(2, 0, 1, 3)], 200, 3)
    roles = {c.a1: c for c in rep.checks}
    assert roles["R"].vacuous and roles["R"].passed
    assert roles["R"].samples <= 200


# -- twirl and decoder -------------------------------------------------------------------


def test_twirl_report():
    rep = verify_twirl([(2, 2), (1, 4)], 10**4, 4)
    assert rep.passed
    c = rep.checks[0]
    assert (c.alpha, c.beta) == pytest.approx((0.4, 0.4), abs=1e-15)
    assert abs(c.trace_mc - c.trace_exact) < 1e-9
    with pytest.raises(BudgetError):
        verify_twirl([(8, 16)], 1, 0)


def test_decoder_small_grid():
    rep = verify_decoder(decoder_grid(6), 20, 1)
    assert rep.passed
    assert max(c.max_error for c in rep.checks) < 1e-10
    assert len(decoder_grid()) == 139

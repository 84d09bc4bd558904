"""Truncation rules and estimator identities, including the univariate coincidences."""

import numpy as np
import pytest

from chainvar import (
    Chain,
    LagPairSequence,
    NoPositiveDefinitePartialSum,
    ar1_simulate,
    Ar1Params,
    mis,
    misadj,
    mk,
    uis,
)
from chainvar.symmat import signed_logdet, signed_logdet_greater


def ar_like(rng, n, p, coef=0.7):
    x = rng.standard_normal((n, p))
    for i in range(1, n):
        x[i] = coef * x[i - 1] + x[i]
    return Chain(x)


class TestUis:
    def test_constant_series_is_degenerate(self):
        est = uis(Chain(np.full(10, 3.0)))
        assert est.degenerate
        assert est.t_n == -1
        assert est.sigma2 == 0.0

    def test_alternating_series(self):
        # pair sums are 0.25, 0.25 so the scan keeps both; the total is 0
        est = uis(Chain([1.0, -1.0, 1.0, -1.0]))
        assert not est.degenerate
        assert est.t_n == 1
        assert est.sigma2 == 0.0

    def test_long_ar1_near_analytic_value(self):
        # scalar AR(1) with a=0.5, V=1 has long-run variance 1/(1-a)^2 = 4
        chain = ar1_simulate(Ar1Params.scalar(0.5), 100_000, seed=20)
        est = uis(chain)
        assert abs(est.sigma2 - 4.0) <= 0.4

    def test_requires_univariate(self):
        rng = np.random.default_rng(0)
        with pytest.raises(ValueError, match="univariate"):
            uis(Chain(rng.standard_normal((10, 2))))

    def test_truncation_invariant(self):
        # every pair up to t_n is positive and the next one (if any) is not
        rng = np.random.default_rng(21)
        for _ in range(10):
            chain = ar_like(rng, int(rng.integers(20, 200)), 1)
            est = uis(chain)
            pairs = LagPairSequence(chain)
            assert all(pairs.pair(i)[0, 0] > 0 for i in range(est.t_n + 1))
            if est.t_n < pairs.max_index:
                assert pairs.pair(est.t_n + 1)[0, 0] <= 0


class TestMis:
    def test_no_pd_partial_sum_raises(self):
        # (0, 2) has exactly one truncated sum and it is the zero matrix
        with pytest.raises(NoPositiveDefinitePartialSum):
            mis(Chain([0.0, 2.0]))

    def test_one_step_stop_fixture(self):
        # iid-like rows where the determinant drops immediately: s = t = 0
        chain = Chain(np.random.default_rng(0).standard_normal((30, 2)))
        est = mis(chain)
        assert est.s_n == 0 and est.t_n == 0
        np.testing.assert_array_equal(est.sigma, LagPairSequence(chain).partial_sum(0))

    def test_determinant_run_property(self):
        # log-dets strictly increase on (s_n, t_n] and the run is maximal
        rng = np.random.default_rng(22)
        for _ in range(10):
            chain = ar_like(rng, int(rng.integers(40, 300)), int(rng.integers(1, 4)))
            try:
                est = mis(chain)
            except NoPositiveDefinitePartialSum:
                continue
            pairs = LagPairSequence(chain)
            dets = [
                signed_logdet(np.linalg.eigvalsh(pairs.partial_sum(m)))
                for m in range(est.t_n + 2 if est.t_n < pairs.max_index else est.t_n + 1)
            ]
            for m in range(est.s_n + 1, est.t_n + 1):
                assert signed_logdet_greater(dets[m], dets[m - 1])
            if est.t_n < pairs.max_index:
                assert not signed_logdet_greater(dets[est.t_n + 1], dets[est.t_n])

    def test_pairs_instance_accepted(self):
        chain = ar_like(np.random.default_rng(1), 100, 2)
        pairs = LagPairSequence(chain)
        a = mis(chain)
        b = mis(pairs)
        assert a.s_n == b.s_n and a.t_n == b.t_n
        np.testing.assert_array_equal(a.sigma, b.sigma)


class TestMisadj:
    def test_univariate_coincidence_is_bit_exact(self):
        rng = np.random.default_rng(23)
        checked = 0
        for _ in range(30):
            chain = ar_like(rng, int(rng.integers(10, 150)), 1, coef=rng.uniform(-0.5, 0.9))
            try:
                a = mis(chain)
            except NoPositiveDefinitePartialSum:
                continue
            b = misadj(chain)
            assert a.sigma[0, 0] == b.sigma[0, 0]
            assert (a.s_n, a.t_n) == (b.s_n, b.t_n)
            checked += 1
        assert checked >= 20

    def test_negative_pair_fixture_gives_psd_gap(self):
        # found by seeded search: some pair inside the run has a negative
        # eigenvalue, so the adjusted estimate strictly dominates
        rng = np.random.default_rng(0)
        chain = ar_like(rng, 250, 2)
        base = mis(chain)
        adj = misadj(chain)
        pairs = LagPairSequence(chain)
        assert any(
            np.linalg.eigvalsh(pairs.pair(i))[0] < 0
            for i in range(base.s_n + 1, base.t_n + 1)
        )
        gap = adj.sigma - base.sigma
        w = np.linalg.eigvalsh((gap + gap.T) / 2)
        assert w[0] >= -1e-12 * max(1.0, w[-1])
        assert w[-1] > 1e-12
        assert adj.logdet >= base.logdet
        assert adj.pd

    def test_logdet_dominates_mis_when_mis_is_psd(self):
        rng = np.random.default_rng(24)
        for _ in range(10):
            chain = ar_like(rng, 200, 3)
            try:
                base = mis(chain)
            except NoPositiveDefinitePartialSum:
                continue
            adj = misadj(chain)
            if base.pd:
                assert adj.logdet >= base.logdet


class TestMk:
    def test_constant_chain_is_degenerate(self):
        est = mk(Chain(np.ones((12, 2))))
        assert est.degenerate and est.t_n == -1
        np.testing.assert_array_equal(est.sigma, np.zeros((2, 2)))
        assert not est.pd

    def test_univariate_truncation_matches_uis_exactly(self):
        rng = np.random.default_rng(25)
        for _ in range(20):
            chain = ar_like(rng, int(rng.integers(10, 150)), 1, coef=rng.uniform(-0.5, 0.9))
            u = uis(chain)
            k = mk(chain)
            assert k.t_n == u.t_n
            if not u.degenerate:
                assert k.sigma[0, 0] == u.sigma2

    def test_start_index_switch(self):
        # with start_index=1 the first pair goes unexamined, so a constant
        # chain truncates at 0 instead of degenerating
        est = mk(Chain(np.ones((12, 2))), start_index=1)
        assert est.t_n == 0 and not est.degenerate
        with pytest.raises(ValueError):
            mk(Chain(np.ones((12, 2))), start_index=2)

    def test_truncates_no_later_than_mis_on_average(self):
        params = Ar1Params.hadamard_fixture(4)
        t_mk, t_mis, ld_mk, ld_mis = [], [], [], []
        for r in range(25):
            pairs = LagPairSequence(ar1_simulate(params, 20_000, seed=1000 + r))
            k = mk(pairs)
            m = mis(pairs)
            t_mk.append(k.t_n)
            t_mis.append(m.t_n)
            ld_mk.append(k.logdet)
            ld_mis.append(m.logdet)
        assert np.mean(t_mk) <= np.mean(t_mis)
        assert np.mean(ld_mk) <= np.mean(ld_mis)


class TestEquivariance:
    def test_permutation(self):
        rng = np.random.default_rng(26)
        chain = ar_like(rng, 150, 3)
        perm = [2, 0, 1]
        permuted = Chain(chain.values[:, perm])
        for method in (mis, misadj, mk):
            a = method(chain)
            b = method(permuted)
            assert (a.s_n, a.t_n) == (b.s_n, b.t_n)
            np.testing.assert_allclose(
                b.sigma, a.sigma[np.ix_(perm, perm)], atol=1e-12
            )

    def test_diagonal_scaling(self):
        # congruence scaling shifts every log-det by a constant, so the
        # truncation indices never move; mis and mk rescale exactly.  The
        # misadj eigenvalue clamp is not congruence-equivariant, so its
        # matrix only rescales exactly when no pair inside the run needs
        # clamping.
        rng = np.random.default_rng(27)
        chain = ar_like(rng, 150, 3)
        d = np.array([2.0, 0.5, 7.0])
        scaled = Chain(chain.values * d)
        dd = np.outer(d, d)
        for method in (mis, misadj, mk):
            a = method(chain)
            b = method(scaled)
            assert (a.s_n, a.t_n) == (b.s_n, b.t_n)
            if method is not misadj:
                np.testing.assert_allclose(b.sigma, a.sigma * dd, rtol=1e-10)

    def test_diagonal_scaling_misadj_without_clamping(self):
        rng = np.random.default_rng(28)
        d = np.array([3.0, 0.25])
        checked = 0
        for _ in range(40):
            chain = ar_like(rng, int(rng.integers(40, 200)), 2)
            try:
                base = mis(chain)
            except NoPositiveDefinitePartialSum:
                continue
            pairs = LagPairSequence(chain)
            if any(
                np.linalg.eigvalsh(pairs.pair(i))[0] < 0
                for i in range(base.s_n + 1, base.t_n + 1)
            ):
                continue
            a = misadj(chain)
            b = misadj(Chain(chain.values * d))
            assert (a.s_n, a.t_n) == (b.s_n, b.t_n)
            np.testing.assert_allclose(b.sigma, a.sigma * np.outer(d, d), rtol=1e-10)
            checked += 1
        assert checked >= 5


def test_short_chains_rejected():
    with pytest.raises(ValueError):
        mis(Chain([1.0]))
    with pytest.raises(ValueError):
        uis(Chain([1.0]))


def test_sixty_five_dimensional_pipeline():
    # the high-dimensional regime the toolkit must support: a 21-group
    # random effects posterior (p = 65) through the full estimate path
    from chainvar import (
        ellipsoid_region,
        ess,
        gibbs_random_effects,
        min_univariate_ess,
        simulate_dataset,
    )

    y = simulate_dataset(21, seed=4)
    chain = gibbs_random_effects(y, n=20_000, seed=5)
    assert chain.p == 65
    pairs = LagPairSequence(chain)
    base = mis(pairs)
    adj = misadj(pairs)
    assert base.pd and adj.pd
    assert adj.logdet >= base.logdet
    value = ess(chain.n, pairs.gamma0, adj.sigma)
    assert 0 < value < chain.n
    assert min_univariate_ess(chain) < value
    region = ellipsoid_region(chain.mean, adj.sigma, chain.n, 0.1)
    assert region.contains(chain.mean)
    assert region.volume > 0.0 and region.volume_root > 0.0

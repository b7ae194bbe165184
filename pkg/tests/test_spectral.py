import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import random_symmetric
from hetou.errors import (
    DegenerateSpectrum,
    EmptyEnsemble,
    MixedDimensions,
    NotNormalized,
    NotOrthonormal,
    TooFewRecords,
)
from hetou.model import symmetric_eigendecomposition
from hetou.spectral import (
    SpectrumAccumulator,
    cpr,
    cpr_vs_temperature,
    inverted_bell_statistic,
    ipr,
    normalized_spacings,
    rank_averaged_ipr,
    spectral_density_histogram,
)

seeds = st.integers(0, 2**32 - 1)


def haar_orthogonal(n, rng):
    q, r = np.linalg.qr(rng.standard_normal((n, n)))
    return q * np.sign(np.diag(r))


# -- IPR / CPR --------------------------------------------------------------


def test_ipr_basis_vector():
    assert ipr(np.eye(5)[2]) == 1.0


def test_ipr_uniform_vector():
    assert ipr(np.full(4, 0.5)) == pytest.approx(0.25, abs=1e-15)


def test_ipr_requires_normalized():
    with pytest.raises(NotNormalized):
        ipr([1.0, 1.0])


@given(seeds, st.integers(1, 40))
def test_ipr_bounds(seed, n):
    v = np.random.default_rng(seed).standard_normal(n)
    v /= np.linalg.norm(v)
    assert 1.0 / n - 1e-12 <= ipr(v) <= 1.0 + 1e-12


@given(seeds, st.integers(1, 30))
def test_ipr_sign_and_permutation_invariant(seed, n):
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(n)
    v /= np.linalg.norm(v)
    w = (v * rng.choice([-1.0, 1.0], n))[rng.permutation(n)]
    assert ipr(w) == pytest.approx(ipr(v), rel=1e-12)


def test_cpr_of_identity():
    np.testing.assert_array_equal(cpr(np.eye(4)), np.ones(4))


def test_cpr_of_hadamard():
    h = np.array([[1, 1, 1, 1], [1, -1, 1, -1], [1, 1, -1, -1], [1, -1, -1, 1]]) / 2.0
    np.testing.assert_allclose(cpr(h), np.full(4, 0.25), atol=1e-15)


def test_cpr_requires_orthonormal():
    with pytest.raises(NotOrthonormal):
        cpr(np.ones((3, 3)))
    with pytest.raises(NotOrthonormal):
        cpr(np.ones((3, 2)))


@given(seeds, st.integers(2, 30))
def test_cpr_sum_equals_ipr_sum(seed, n):
    u = haar_orthogonal(n, np.random.default_rng(seed))
    iprs = np.sum(u**4, axis=0)
    assert cpr(u).sum() == pytest.approx(iprs.sum(), rel=1e-12)
    assert np.all(cpr(u) >= 1.0 / n - 1e-12)


def test_goe_bulk_ipr_near_three_over_n():
    n, m = 100, 100
    rng = np.random.default_rng(11)
    decs = [symmetric_eigendecomposition(random_symmetric(n, rng)) for _ in range(m)]
    bulk = rank_averaged_ipr(decs)[n // 4: 3 * n // 4]
    assert np.mean(bulk) == pytest.approx(3.0 / n, rel=0.10)


def test_rank_averaged_ipr_validation():
    with pytest.raises(EmptyEnsemble):
        rank_averaged_ipr([])
    decs = [symmetric_eigendecomposition(np.eye(2)), symmetric_eigendecomposition(np.eye(3))]
    with pytest.raises(MixedDimensions):
        rank_averaged_ipr(decs)


# -- spacings ---------------------------------------------------------------


def test_equally_spaced_spacings_are_one():
    np.testing.assert_allclose(normalized_spacings(np.arange(6.0)), np.ones(5))
    np.testing.assert_allclose(normalized_spacings(np.arange(6.0), "pooled"), np.ones(5))


def test_spacings_validation():
    with pytest.raises(DegenerateSpectrum):
        normalized_spacings(np.ones(5))
    with pytest.raises(ValueError):
        normalized_spacings([2.0, 1.0])
    with pytest.raises(ValueError):
        normalized_spacings([1.0])
    with pytest.raises(ValueError):
        normalized_spacings([1.0, 2.0], "global")


@given(seeds, st.integers(3, 20), st.integers(2, 10))
def test_spacing_mean_one_per_rank(seed, n, m):
    rng = np.random.default_rng(seed)
    ev = np.sort(rng.standard_normal((m, n)), axis=1)
    s = normalized_spacings(ev).reshape(m, n - 1)
    np.testing.assert_allclose(s.mean(axis=0), 1.0, rtol=1e-12)
    assert normalized_spacings(ev, "pooled").mean() == pytest.approx(1.0, rel=1e-12)


def test_goe_level_repulsion():
    rng = np.random.default_rng(5)
    ev = np.vstack([np.linalg.eigvalsh(random_symmetric(100, rng)) for _ in range(200)])
    s = normalized_spacings(ev)
    assert np.mean(s < 0.05) < 0.01


# -- density histogram ------------------------------------------------------


def test_histogram_counts_everything():
    rng = np.random.default_rng(0)
    ev = np.sort(rng.standard_normal((10, 20)), axis=1)
    h = spectral_density_histogram(ev, bins=15)
    assert h.counts.sum() == 200 and h.n_samples == 10 and h.n_values == 200
    assert np.sum(h.density * np.diff(h.edges)) == pytest.approx(1.0)


def test_histogram_default_rule_and_explicit_edges():
    ev = np.linspace(-1, 1, 50)
    h = spectral_density_histogram(ev)
    assert h.counts.sum() == 50
    h2 = spectral_density_histogram(ev, bins=[-2.0, 0.0, 2.0])
    np.testing.assert_array_equal(h2.counts, [25, 25])
    with pytest.raises(ValueError):
        spectral_density_histogram(ev, bins=[0.0, 2.0])


# -- CPR scatter and inverted bell -----------------------------------------


def test_cpr_records_layout():
    rng = np.random.default_rng(1)
    t = np.exp(rng.standard_normal(4))
    dec = symmetric_eigendecomposition(random_symmetric(4, rng))
    rec = cpr_vs_temperature([(t, dec), (t, dec)])
    assert len(rec) == 8
    np.testing.assert_array_equal(rec.sample, [0, 0, 0, 0, 1, 1, 1, 1])
    np.testing.assert_array_equal(rec.component, [0, 1, 2, 3] * 2)
    np.testing.assert_allclose(rec.log_t[:4], np.log(t))
    with pytest.raises(MixedDimensions):
        cpr_vs_temperature([(t[:3], dec)])


def test_inverted_bell_sign():
    x = np.linspace(-2, 2, 41)
    assert inverted_bell_statistic(x, x**2) == pytest.approx(1.0)
    assert inverted_bell_statistic(x, -(x**2)) == pytest.approx(-1.0)


def test_inverted_bell_constant_input_is_zero():
    assert inverted_bell_statistic(np.zeros(20), np.arange(20.0)) == 0.0
    assert inverted_bell_statistic(np.arange(20.0), np.ones(20)) == 0.0


def test_inverted_bell_needs_records():
    with pytest.raises(TooFewRecords):
        inverted_bell_statistic(np.arange(9.0), np.arange(9.0))
    with pytest.raises(MixedDimensions):
        inverted_bell_statistic(np.arange(12.0), np.arange(11.0))


# -- accumulator ------------------------------------------------------------


def test_accumulator_summary():
    rng = np.random.default_rng(2)
    acc = SpectrumAccumulator(keep_records=2)
    decs = [symmetric_eigendecomposition(random_symmetric(6, rng)) for _ in range(5)]
    for d in decs:
        acc.add(d, np.exp(rng.standard_normal(6)))
    summ = acc.summary(bins=10)
    np.testing.assert_allclose(summ.rank_ipr, rank_averaged_ipr(decs))
    assert summ.spacings.shape == (5 * 5,)
    assert len(summ.cpr_records) == 12
    assert summ.density.counts.sum() == 30
    np.testing.assert_allclose(summ.rank_eigenvalue_mean, np.mean([d.eigenvalues for d in decs], axis=0))
    with pytest.raises(MixedDimensions):
        acc.add(symmetric_eigendecomposition(np.eye(3)))


def test_accumulator_empty():
    with pytest.raises(EmptyEnsemble):
        SpectrumAccumulator().summary()


def test_single_sample_sem_is_nan():
    acc = SpectrumAccumulator()
    acc.add(symmetric_eigendecomposition(np.diag([1.0, 2.0, 3.0])))
    assert np.all(np.isnan(acc.summary(bins=3).rank_ipr_sem))
    assert math.isclose(acc.summary(bins=3).rank_ipr[0], 1.0)

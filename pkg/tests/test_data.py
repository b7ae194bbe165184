import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hetou.data import (
    ReturnsPanel,
    diffusion_estimator,
    empirical_analysis,
    estimate_lognormal_params,
    load_returns_csv,
    write_returns_csv,
)
from hetou.errors import EmptyPanel, ParseError, TooFewSamples, ZeroVarianceAsset


def write(tmp_path, text, name="r.csv"):
    p = tmp_path / name
    p.write_text(text)
    return p


# -- ingestion --------------------------------------------------------------


def test_load_simple(tmp_path):
    panel = load_returns_csv(write(tmp_path, "A,B\n0.1,0.2\n-0.1,0.0\n0.05,0.3\n"))
    assert panel.asset_ids == ("A", "B")
    assert panel.m == 3 and panel.n == 2
    assert panel.report.rows_read == 3 and panel.report.rows_dropped == 0


def test_parse_error_has_line_and_column(tmp_path):
    with pytest.raises(ParseError) as info:
        load_returns_csv(write(tmp_path, "A,B\n0.1,0.2\n0.3,abc\n"))
    assert info.value.line == 3 and info.value.column == 2
    assert "line 3" in str(info.value)


def test_ragged_row(tmp_path):
    with pytest.raises(ParseError) as info:
        load_returns_csv(write(tmp_path, "A,B\n0.1,0.2\n0.3\n"))
    assert info.value.line == 3


def test_non_finite_value(tmp_path):
    with pytest.raises(ParseError):
        load_returns_csv(write(tmp_path, "A,B\n0.1,inf\n0.3,0.1\n"))


def test_na_row_dropped_and_reported(tmp_path):
    p = write(tmp_path, "A,B\n0.1,0.2\nNA,0.1\n0.3,0.5\n-0.2,0.0\n")
    panel = load_returns_csv(p)
    assert panel.m == 3
    assert panel.report.rows_read == 4 and panel.report.rows_dropped == 1
    np.testing.assert_array_equal(panel.returns[:, 0], [0.1, 0.3, -0.2])
    with pytest.raises(ParseError) as info:
        load_returns_csv(p, na_policy="error")
    assert (info.value.line, info.value.column) == (3, 1)


def test_zero_variance_asset_removed(tmp_path):
    panel = load_returns_csv(write(tmp_path, "A,B,C\n0.1,1,0.2\n0.2,1,0.1\n0.4,1,0.0\n"))
    assert panel.asset_ids == ("A", "C")
    assert panel.report.dropped_assets == ("B",)


def test_empty_inputs(tmp_path):
    with pytest.raises(EmptyPanel):
        load_returns_csv(write(tmp_path, ""))
    with pytest.raises(EmptyPanel):
        load_returns_csv(write(tmp_path, "A,B\nNA,1\n"))
    with pytest.raises(ParseError):
        load_returns_csv(write(tmp_path, "A,,B\n1,2,3\n"))


def test_csv_round_trip(tmp_path):
    r = np.random.default_rng(0).standard_normal((30, 4)) * 1e-3
    panel = ReturnsPanel.from_array(r, ["x", "y", "z", "w"])
    write_returns_csv(tmp_path / "out.csv", panel)
    back = load_returns_csv(tmp_path / "out.csv")
    np.testing.assert_array_equal(back.returns, r)
    assert back.asset_ids == panel.asset_ids


def test_panel_needs_two_rows():
    with pytest.raises(TooFewSamples):
        ReturnsPanel.from_array(np.ones((1, 3)))


# -- estimators -------------------------------------------------------------


def test_diffusion_alternating_sign():
    a = 0.3
    m = 10
    r = (a * (-1.0) ** np.arange(m))[:, None]
    assert diffusion_estimator(r)[0] == pytest.approx(4 * a**2 * (m - 1) / m, rel=1e-14)


def test_diffusion_iid_is_twice_variance():
    s = 0.02
    r = np.random.default_rng(1).normal(0, s, (200_000, 2))
    np.testing.assert_allclose(diffusion_estimator(r), 2 * s**2, rtol=0.02)


def test_diffusion_constant_is_zero():
    assert diffusion_estimator(np.ones((5, 1)))[0] == 0.0


def test_lognormal_parameter_recovery():
    rng = np.random.default_rng(2)
    n, m = 400, 4000
    variances = np.exp(-8.0 + 0.6 * rng.standard_normal(n))
    r = rng.standard_normal((m, n)) * np.sqrt(variances)
    est = estimate_lognormal_params(ReturnsPanel.from_array(r))
    assert abs(est.mu_hat - np.log(variances).mean()) < 0.01
    assert abs(est.d_hat - np.log(variances).std()) < 0.01
    assert est.d_variance_form == pytest.approx(est.d_hat**2)
    assert est.mu_stderr == pytest.approx(est.d_hat / math.sqrt(n))


def test_zero_variance_in_estimate():
    r = np.column_stack([np.random.default_rng(0).standard_normal(10), np.ones(10)])
    panel = ReturnsPanel.from_array(r, ["a", "b"])
    assert estimate_lognormal_params(panel).excluded == ("b",)
    with pytest.raises(ZeroVarianceAsset):
        estimate_lognormal_params(panel, strict=True)


# -- empirical spectra ------------------------------------------------------


def test_duplicated_assets_localize_on_the_pair():
    rng = np.random.default_rng(3)
    base = rng.standard_normal((5000, 4))
    r = np.column_stack([base, base[:, 0]])
    an = empirical_analysis(ReturnsPanel.from_array(r))
    # the top eigenvector is (1, 0, 0, 0, 1)/sqrt(2)
    assert an.rank_ipr[-1] == pytest.approx(0.5, abs=0.01)
    assert an.decompositions[0].eigenvalues[0] == pytest.approx(0.0, abs=1e-10)


@given(st.integers(0, 2**32 - 1))
def test_row_permutation_invariance(seed):
    rng = np.random.default_rng(seed)
    r = rng.standard_normal((40, 5))
    a = empirical_analysis(ReturnsPanel.from_array(r))
    b = empirical_analysis(ReturnsPanel.from_array(r[rng.permutation(40)]))
    np.testing.assert_allclose(a.decompositions[0].eigenvalues, b.decompositions[0].eigenvalues, atol=1e-12)
    np.testing.assert_allclose(a.cpr, b.cpr, atol=1e-8)


def test_splits_and_spacing_modes():
    r = np.random.default_rng(4).standard_normal((120, 6))
    one = empirical_analysis(ReturnsPanel.from_array(r))
    assert one.spacing_mode == "pooled" and one.splits == 1
    many = empirical_analysis(ReturnsPanel.from_array(r), splits=4)
    assert many.spacing_mode == "rank" and many.splits == 4
    assert len(many.scatter) == 24 and many.spacings.shape == (4 * 5,)
    np.testing.assert_array_equal(np.unique(many.scatter.sample), [0, 1, 2, 3])
    with pytest.raises(TooFewSamples):
        empirical_analysis(ReturnsPanel.from_array(r[:5]), splits=3)
    with pytest.raises(ValueError):
        empirical_analysis(ReturnsPanel.from_array(r), splits=0)

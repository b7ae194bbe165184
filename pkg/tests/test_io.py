import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from hetou.io import (
    RunManifest,
    read_matrix_csv,
    read_vector_csv,
    write_json,
    write_matrix_csv,
    write_rows_csv,
    write_summary_csvs,
    write_vector_csv,
)
from hetou.model import symmetric_eigendecomposition
from hetou.spectral import SpectrumAccumulator

finite = st.floats(allow_nan=False, allow_infinity=False, width=64)


@given(arrays(np.float64, st.tuples(st.integers(1, 5), st.integers(1, 5)), elements=finite))
def test_matrix_round_trip_is_exact(m):
    import tempfile
    from pathlib import Path

    with tempfile.TemporaryDirectory() as d:
        p = Path(d) / "m.csv"
        write_matrix_csv(p, m)
        np.testing.assert_array_equal(read_matrix_csv(p), m)


def test_vector_round_trip(tmp_path):
    v = np.array([1.0, 1e-300, 3.3e12, -0.1])
    write_vector_csv(tmp_path / "v.csv", v)
    np.testing.assert_array_equal(read_vector_csv(tmp_path / "v.csv"), v)
    (tmp_path / "row.csv").write_text("1.0,2.0,3.0\n")
    np.testing.assert_array_equal(read_vector_csv(tmp_path / "row.csv"), [1.0, 2.0, 3.0])


def test_ragged_matrix_rejected(tmp_path):
    (tmp_path / "bad.csv").write_text("1,2\n3\n")
    with pytest.raises(ValueError):
        read_matrix_csv(tmp_path / "bad.csv")


def test_rows_csv_header(tmp_path):
    write_rows_csv(tmp_path / "r.csv", ["a", "b"], [(1, 0.5), (2, np.float64(0.25))])
    assert (tmp_path / "r.csv").read_text() == "a,b\n1,0.5\n2,0.25\n"


def test_json_handles_numpy(tmp_path):
    write_json(tmp_path / "x.json", {"b": np.arange(3), "a": np.float64(1.5), "c": np.int64(2)})
    text = (tmp_path / "x.json").read_text()
    assert json.loads(text) == {"a": 1.5, "b": [0, 1, 2], "c": 2}
    assert text.index('"a"') < text.index('"b"')


def test_summary_csv_contracts(tmp_path):
    rng = np.random.default_rng(0)
    acc = SpectrumAccumulator(keep_records=1)
    for _ in range(3):
        a = rng.standard_normal((4, 4))
        acc.add(symmetric_eigendecomposition(a + a.T), np.exp(rng.standard_normal(4)))
    paths = write_summary_csvs(tmp_path, acc.summary(bins=5))
    heads = {p.name: p.read_text().splitlines()[0] for p in paths}
    assert heads == {
        "density.csv": "bin_left,bin_right,count,density",
        "rank_ipr.csv": "rank,eigenvalue_mean,ipr_mean,ipr_sem",
        "spacings.csv": "sample,rank,s",
        "cpr_scatter.csv": "sample,component,log_t,cpr",
    }
    assert len((tmp_path / "spacings.csv").read_text().splitlines()) == 1 + 3 * 3
    assert len((tmp_path / "cpr_scatter.csv").read_text().splitlines()) == 1 + 4


def test_manifest_fields(tmp_path):
    m = RunManifest(command=["hetou", "sample"], config={"n": 3}, seeds=[0], tolerances={"x": 1e-9})
    payload = json.loads(m.write(tmp_path).read_text())
    for key in ("command", "config", "seeds", "tolerances", "artifacts", "wall_time_s", "version", "numpy", "python"):
        assert key in payload

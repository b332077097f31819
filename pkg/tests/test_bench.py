"""Bench harness tests: row shape, CSV contract, and the size laws.  Timing
magnitudes are asserted only in the acceptance suite (shape, not speed)."""

import pytest

from kapre import bench


@pytest.fixture(scope="module")
def report():
    return bench.run_sweep([2, 4], [0.5, 1.0], iterations=30, curve="ss512", seed=77)


def test_row_count_and_fields(report):
    assert len(report.rows) == len(bench.OPERATIONS) * 2 * 2
    for row in report.rows:
        assert row.operation in bench.OPERATIONS
        assert row.iters == 30 and row.seed == 77
        assert row.mean_ns > 0 and row.mom_ns > 0 and row.bytes > 0
        assert 1 <= row.set_size <= row.n


def test_set_size_from_fraction(report):
    assert {(r.n, r.set_size) for r in report.rows} == {(2, 1), (2, 2), (4, 2), (4, 4)}


def test_token_size_constant(report):
    token_sizes = {r.bytes for r in report.rows if r.operation == "rekeygen"}
    assert len(token_sizes) == 1


def test_naive_baseline_law(report):
    token = next(r.bytes for r in report.rows if r.operation == "rekeygen")
    for row in report.rows:
        if row.operation == "rekeygen_naive":
            assert row.bytes == row.set_size * token


def test_csv_header_exact(report, tmp_path):
    path = bench.emit_csv(report, tmp_path / "r.csv")
    header = path.read_text().splitlines()[0]
    assert header == "operation,n,set_size,mean_ns,std_ns,iters,bytes,seed"


def test_csv_roundtrip(report, tmp_path):
    path = bench.emit_csv(report, tmp_path / "r.csv")
    again = bench.parse_csv(path)
    assert again.rows == report.rows  # mom_ns excluded from equality by design


def test_csv_rejects_foreign_header(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("a,b,c\n1,2,3\n")
    with pytest.raises(ValueError):
        bench.parse_csv(bad)


def test_emit_csv_rejects_empty(tmp_path):
    with pytest.raises(ValueError):
        bench.emit_csv(bench.BenchReport("ss512", []), tmp_path / "x.csv")


def test_min_iterations_enforced():
    with pytest.raises(ValueError):
        bench.run_sweep([2], [1.0], iterations=10)


def test_summary_mentions_each_operation(report):
    text = report.summary()
    for op in bench.OPERATIONS:
        assert op in text


def test_row_lookup(report):
    row = report.row("enc2", 4, 4)
    assert row.n == 4 and row.set_size == 4
    with pytest.raises(KeyError):
        report.row("enc2", 999)


def test_measure_returns_stats():
    mean, std, mom = bench.measure(lambda: None, 40)
    assert mean >= 0 and std >= 0 and mom >= 0

from ggtkit.bench import BenchRecord, bench_run, fit_slope, run_one, summarize, to_csv


def test_pn_slope_on_spec_sizes():
    records, summary = bench_run([8, 12, 16, 24, 32], [0], ("pn",), wall=False)
    assert all(r.status == "ok" for r in records)
    slope = fit_slope([(r.n, r.lines) for r in records])
    assert slope <= 3.2, slope
    assert any(line.startswith("slope pn lines") for line in summary)


def test_pool_slopes_within_bounds():
    records, _ = bench_run(range(4, 11), [0], ("pool",), wall=False)
    good = [r for r in records if r.n >= 6]
    assert fit_slope([(r.n, r.lines) for r in good]) <= 6.2
    assert fit_slope([(r.n, r.maxWidth) for r in good]) <= 2.2


def test_node_budget_degrades_to_timeout_row():
    records, _ = bench_run([8, 4], [0], ("pool",), node_budget=40, wall=False)
    statuses = {r.n: r.status for r in records}
    assert statuses[8] == "TIMEOUT"
    # the sweep continued past the capped run
    assert len(records) == 2


def test_timeout_rows_excluded_from_slopes():
    ok = BenchRecord("ggt", 8, 0, "pool", lines=100, status="ok")
    bad = BenchRecord("ggt", 9, 0, "pool", lines=1, status="TIMEOUT")
    ok2 = BenchRecord("ggt", 10, 0, "pool", lines=200, status="ok")
    lines = summarize([ok, bad, ok2])
    slope = fit_slope([(8, 100), (10, 200)])
    assert f"slope pool lines: {slope:.2f}" in lines


def test_csv_shape():
    rec = run_one("dpll", 4, 0)
    text = to_csv([rec])
    header, row = text.strip().split("\n")
    assert len(header.split(",")) == len(row.split(","))
    assert rec.conflicts > 0 and rec.decisions >= 0

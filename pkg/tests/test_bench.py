from spinorbit.bench import format_benchmark, run_benchmark
from spinorbit.kernels import available_backends


def test_benchmark_runs_and_backends_agree():
    res = run_benchmark(order=10, full_return=False)
    assert set(res["backends"]) == set(available_backends())
    for entry in res["backends"].values():
        assert entry["matches_first_backend"]
        assert entry["state_series_ms"] > 0
    text = format_benchmark(res)
    assert "bit-identical" in text


def test_benchmark_reports_speedup_when_compiled():
    if "compiled" not in available_backends():
        return
    res = run_benchmark(order=14, full_return=False)
    assert res["speedup_var_series"] > 3.0

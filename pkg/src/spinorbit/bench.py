"""Benchmark of the compiled kernel against the pure-Python fallback.

Times the two series kernels on representative workloads and one full
rigorous return, and cross-checks that both backends produce identical
bits on the sampled inputs.
"""

from __future__ import annotations

import time

from .kernels import available_backends, load_backend
from .model import ModelParams

IDENT9 = (
    (1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0),
    (1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0),
)


def _time_call(fn, min_seconds=0.4):
    n = 0
    t0 = time.perf_counter()
    while True:
        fn()
        n += 1
        dt = time.perf_counter() - t0
        if dt >= min_seconds and n >= 3:
            return dt / n


def run_benchmark(order: int = 21, full_return: bool = True) -> dict:
    params = ModelParams()
    pk = params.kernel_pack()
    x_point = (1.1, 1.1, 0.9, 0.9, 0.3, 0.3)
    x_box = (1.1, 1.13, 0.9, 0.93, 0.3, 0.33)

    results: dict = {"order": order, "backends": {}}
    baseline_outputs = None
    for name in available_backends():
        ss, vs = load_backend(name)
        entry = {
            "state_series_ms": 1e3 * _time_call(lambda: ss(x_point, order, pk)),
            "var_series_ms": 1e3 * _time_call(lambda: vs(x_box, IDENT9, order, pk)),
        }
        outputs = (ss(x_point, order, pk), vs(x_box, IDENT9, order, pk))
        if baseline_outputs is None:
            baseline_outputs = outputs
            entry["matches_first_backend"] = True
        else:
            entry["matches_first_backend"] = outputs == baseline_outputs
        results["backends"][name] = entry

    if full_return:
        from .integrator import Settings
        from .linalg import IntervalVector
        from .poincare import ReturnMap

        for name in available_backends():
            # re-select the backend through a fresh evaluator path
            ss, vs = load_backend(name)
            import spinorbit.kernels as K

            old = (K.state_series, K.var_series)
            K.state_series, K.var_series = ss, vs
            try:
                rm = ReturnMap(params, Settings())
                box = IntervalVector.box([(1.3, 1.3), (1.0, 1.0)])
                t0 = time.perf_counter()
                rm.poincare_map(box, 1)
                results["backends"][name]["one_return_s"] = time.perf_counter() - t0
            finally:
                K.state_series, K.var_series = old

    names = list(results["backends"])
    if len(names) == 2:
        fast, slow = results["backends"][names[0]], results["backends"][names[1]]
        results["speedup_var_series"] = slow["var_series_ms"] / fast["var_series_ms"]
        if "one_return_s" in fast and "one_return_s" in slow:
            results["speedup_one_return"] = (
                slow["one_return_s"] / fast["one_return_s"]
            )
    return results


def format_benchmark(results: dict) -> str:
    lines = [f"kernel benchmark (Taylor order {results['order']})"]
    for name, entry in results["backends"].items():
        lines.append(
            f"  {name:9s} state_series {entry['state_series_ms']:9.3f} ms   "
            f"var_series {entry['var_series_ms']:9.3f} ms   "
            + (
                f"one return {entry['one_return_s'] * 1e3:9.1f} ms   "
                if "one_return_s" in entry
                else ""
            )
            + ("bit-identical" if entry["matches_first_backend"] else "MISMATCH")
        )
    if "speedup_var_series" in results:
        lines.append(f"  speedup (var_series): {results['speedup_var_series']:.1f}x")
    if results.get("speedup_one_return"):
        lines.append(f"  speedup (one return): {results['speedup_one_return']:.1f}x")
    return "\n".join(lines)

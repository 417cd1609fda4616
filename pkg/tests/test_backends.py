"""Cross-validation of the compiled and pure-Python kernels.

The two backends implement the same algorithms with the same rounding
policy and constants; they must agree bit for bit.
"""

import random

import pytest

from spinorbit.kernels import available_backends, load_backend
from spinorbit.model import ModelParams

pytestmark = pytest.mark.skipif(
    "compiled" not in available_backends(),
    reason="compiled kernel not built",
)

IDENT = (
    (1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0),
    (1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0),
)


def random_inputs(rng, width):
    th = rng.uniform(0.1, 3.0)
    ph = rng.uniform(-0.5, 2.4)
    f = rng.uniform(0.0, 13.0)
    w = [rng.uniform(0, width) for _ in range(3)]
    return (th, th + w[0], ph, ph + w[1], f, f + w[2])


@pytest.mark.parametrize("width", [0.0, 1e-9, 1e-3, 0.3])
def test_state_series_bit_identical(width):
    ss_py, _ = load_backend("python")
    ss_c, _ = load_backend("compiled")
    rng = random.Random(int(width * 1e6) + 1)
    for _ in range(20):
        x = random_inputs(rng, width)
        for params in (ModelParams(), ModelParams(e=0.0), ModelParams(e="0.1042")):
            for sign in (1.0, -1.0):
                pk = params.kernel_pack(sign)
                a = ss_py(x, 12, pk)
                b = ss_c(x, 12, pk)
                assert a == b


@pytest.mark.parametrize("width", [0.0, 1e-6, 0.2])
def test_var_series_bit_identical(width):
    _, vs_py = load_backend("python")
    _, vs_c = load_backend("compiled")
    rng = random.Random(int(width * 1e6) + 2)
    for _ in range(8):
        x = random_inputs(rng, width)
        pk = ModelParams().kernel_pack()
        ca, va = vs_py(x, IDENT, 10, pk)
        cb, vb = vs_c(x, IDENT, 10, pk)
        assert ca == cb
        assert va == vb


def test_var_series_bit_identical_backward():
    _, vs_py = load_backend("python")
    _, vs_c = load_backend("compiled")
    pk = ModelParams().kernel_pack(-1.0)
    x = (1.1, 1.1, 0.9, 0.9, 0.3, 0.3)
    ca, va = vs_py(x, IDENT, 15, pk)
    cb, vb = vs_c(x, IDENT, 15, pk)
    assert ca == cb
    assert va == vb


def test_order_bound_enforced():
    ss_c, _ = load_backend("compiled")
    with pytest.raises(ValueError):
        ss_c((1.0, 1.0, 1.0, 1.0, 0.0, 0.0), 70, ModelParams().kernel_pack())

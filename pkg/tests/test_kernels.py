"""The compiled and pure-Python kernels must agree bit for bit."""

from array import array

import pytest

from k3tower import _pykernels, kernels
from k3tower.fermat import build_extension, quartic_tables

compiled = pytest.importorskip("k3tower._kernels")


def test_backend_selected():
    assert kernels.BACKEND in {"cython", "python"}


@pytest.mark.parametrize("p, k", [(3, 2), (5, 2), (7, 2), (3, 4)])
def test_quartic_kernels_agree(p, k):
    tab = quartic_tables(build_extension(p, k))
    q = tab.q
    args = (tab.pow4, tab.add, tab.fiber, tab.neg, q)
    for lo, hi in ((0, q), (0, 1), (1, q // 2), (q // 2, q)):
        assert compiled.quartic_zero_count(*args, lo, hi) == _pykernels.quartic_zero_count(*args, lo, hi)


@pytest.mark.parametrize(
    "rows, ell, n, m",
    [
        ([1, 0, 0, 0, 1, 0, 0, 0, 1], 3, 2, 1),
        ([0] * 9, 3, 2, 1),
        ([1, 0, 0, 0, 1, 0, 0, 0, 3], 3, 2, 1),
        ([1, 2, 0, 0, 1, 4, 0, 0, 1], 5, 2, 1),
        ([1, 0, 0, 0, 1, 0, 0, 0, 1], 3, 3, 2),
        ([3, 0, 0, 0, 1, 0, 0, 0, 1], 3, 3, 2),
    ],
)
def test_kernel_sweeps_agree(rows, ell, n, m):
    flat = array("q", rows)
    assert compiled.kernel_violations(flat, ell, n, m) == _pykernels.kernel_violations(flat, ell, n, m)

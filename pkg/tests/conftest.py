import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(__file__))

from qhkit import ComplexMeasure, DataTriple, Density, lebesgue_tilde  # noqa: E402


@pytest.fixture
def rng():
    return np.random.default_rng(20261015)


@pytest.fixture
def ex54():
    """``dnu = dt/(t + i)**2``: equals ``2i + 4/(z + i)`` above the axis, zero below."""
    return DataTriple(0, 0, ComplexMeasure((), (Density.rational((1,), (-1, 2j, 1)),)))


@pytest.fixture
def lam():
    return DataTriple(0, 0, lebesgue_tilde())


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(results):
        ok, detail, secs = results[n]
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'} [{secs:.1f}s] {detail}")

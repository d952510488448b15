import numpy as np
import pytest

from tsplex import build_complex
from tsplex.errors import DimensionMismatch
from tsplex.signals import SignalMatrix, load_signal_csv, save_signal_csv


def test_roundtrip_no_header(tmp_path):
    vals = np.random.default_rng(0).standard_normal((4, 7))
    save_signal_csv(SignalMatrix(vals, 1), tmp_path / "s.csv")
    back = load_signal_csv(tmp_path / "s.csv", level=1)
    assert np.array_equal(back.values, vals)


def test_roundtrip_with_header(tmp_path):
    vals = np.random.default_rng(1).standard_normal((3, 5))
    save_signal_csv(SignalMatrix(vals, 0), tmp_path / "s.csv", header=True)
    back = load_signal_csv(tmp_path / "s.csv", level=0)
    assert np.array_equal(back.values, vals)


def test_check_against_complex():
    cx = build_complex(3, [(0, 1), (0, 2), (1, 2)], [(0, 1, 2)])
    SignalMatrix(np.zeros((3, 2)), 1).check_against(cx)
    SignalMatrix(np.zeros((1, 2)), 2).check_against(cx)
    with pytest.raises(DimensionMismatch):
        SignalMatrix(np.zeros((4, 2)), 1).check_against(cx)

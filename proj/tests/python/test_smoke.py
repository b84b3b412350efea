import math
from pathlib import Path

import numpy as np
import pytest

import sharp_interface_lab as sil

ROOT = Path(__file__).resolve().parents[2]
CONFIGS = ROOT / "configs"
TINY = ROOT / "tests" / "cli" / "tiny_1d.json"


def test_profile_table():
    p = sil.profile(CONFIGS / "acceptance" / "profile.json")
    assert abs(p["cF"] - p["cF_tilde"]) < 1e-8
    alpha = p["alpha"]
    assert np.all(np.diff(alpha) >= 0)
    assert abs(alpha[0] + alpha[-1]) < 1e-12


def test_run_energy_decreases():
    r = sil.run(TINY)
    A = r["records"]["A_eps"]
    assert len(A) >= 2
    assert np.all(np.diff(A) <= 1e-8 * A[0])
    assert r["sup_max_norm"] <= r["initial_max_norm"] + 0.5 + 1e-6


def test_run_is_deterministic():
    a = sil.run(TINY)["records"]["E_eps"]
    b = sil.run(TINY)["records"]["E_eps"]
    assert np.array_equal(a, b)


def test_fit_loglog():
    slope, intercept, _ = sil.fit_loglog([0.1, 0.05, 0.025], [0.2, 0.1, 0.05])
    assert abs(slope - 1) < 1e-12
    assert abs(intercept - math.log(2)) < 1e-12
    with pytest.raises(sil.SilError):
        sil.fit_loglog([0.1, 0.05], [1.0, 2.0])


def test_config_error_is_raised(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"version": 7}')
    with pytest.raises(sil.SilError, match="ConfigInvalid"):
        sil.run(bad)


def test_single_criterion():
    (res,) = sil.acceptance(CONFIGS / "acceptance", ROOT / "goldens" / "goldens.json", [1])
    assert res["id"] == 1 and res["pass"]

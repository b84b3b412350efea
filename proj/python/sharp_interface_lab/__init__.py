"""Python access to the sharp-interface-lab core."""

import json

import numpy as np

from . import _core
from ._core import SilError

__all__ = ["SilError", "profile", "run", "sweep", "make_goldens", "acceptance", "fit_loglog"]


def profile(config):
    """Optimal profile table and surface tension for the potential in ``config``."""
    d = json.loads(_core.profile(str(config)))
    for k in ("s", "alpha", "alpha_prime"):
        d[k] = np.asarray(d[k])
    return d


def run(config, eps=None, out_dir="", snapshots="none"):
    """One solver run. Records come back as a dict of arrays keyed by column."""
    d = json.loads(_core.run(str(config), 0.0 if eps is None else float(eps), str(out_dir), snapshots))
    recs = d.pop("records")
    d["records"] = {k: np.asarray([r[k] for r in recs]) for k in recs[0]} if recs else {}
    return d


def sweep(config, out_dir=""):
    return json.loads(_core.sweep(str(config), str(out_dir)))


def make_goldens(config):
    return json.loads(_core.make_goldens(str(config)))


def acceptance(config_dir, goldens, ids=()):
    return json.loads(_core.acceptance(str(config_dir), str(goldens), list(ids)))


def fit_loglog(x, y):
    """Least-squares fit of log y against log x; returns (slope, intercept, slope_se)."""
    return _core.fit_loglog(list(map(float, x)), list(map(float, y)))

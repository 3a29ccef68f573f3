"""Method-of-moments estimation for inhomogeneous Poisson processes."""

import json

from . import _pmme
from ._pmme import PmmeError, builtin_defaults, builtins, edgeworth_cdf, hermite, moment, normal_cdf, sample_path

__all__ = [
    "PmmeError",
    "builtin_defaults",
    "builtins",
    "check_conditions",
    "coefficients",
    "edgeworth_cdf",
    "estimate",
    "example4_config",
    "hermite",
    "moment",
    "normal_cdf",
    "run_experiment",
    "sample_path",
]


def coefficients(model="periodic_sine", theta0=None, params=None, k=3):
    """Expansion coefficients at theta0 (default: midpoint of the parameter interval)."""
    params = params or {}
    if theta0 is None:
        theta0 = _midpoint(model, {**builtin_defaults(model), **params})
    return json.loads(_pmme.coefficients_json(model, theta0, params, k))


def estimate(mbar, model="periodic_sine", params=None):
    """Clamped method-of-moments estimate for an observed moment mbar."""
    return json.loads(_pmme.estimate_json(model, mbar, params or {}))


def check_conditions(model="periodic_sine", params=None, max_m=8):
    return json.loads(_pmme.check_conditions_json(model, params or {}, max_m))


def example4_config():
    return json.loads(_pmme.example4_config_json())


def run_experiment(config=None, workers=-1, **overrides):
    """Monte Carlo run; `config` is a dict (defaults to periodic_sine at theta0 = pi/3, n = 1000, N = 10000)."""
    cfg = dict(config) if config is not None else example4_config()
    cfg.update(overrides)
    return json.loads(_pmme.run_experiment_json(json.dumps(cfg), workers))


def _midpoint(model, params):
    return 0.5 * (params["alpha"] + params["beta"])

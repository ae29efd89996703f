"""Python access to the harmonic map lab."""

import json

from ._hmlab import (
    ScenarioInvalid,
    euclidean_comparison_distance,
    hyperbolic_comparison_distance,
    integrate_quadratic_ball,
    integrate_quadratic_product_sphere,
    integrate_quadratic_sphere,
    known_checks,
    quadrature_selftest,
    validate_scenario,
)
from ._hmlab import run_scenario as _run_scenario
from ._hmlab import target_distance as _target_distance


def target_distance(spec, p, q):
    """Distance in the target described by `spec` (a dict as in scenario files)."""
    return _target_distance(json.dumps(spec), list(p), list(q))


def run_scenario(path, out=None, checks=None, threads=1, write=True):
    """Run a scenario file. Returns (exit_code, summary dict, written paths)."""
    code, summary, manifest = _run_scenario(str(path), None if out is None else str(out), checks, threads, write)
    return code, json.loads(summary), manifest


__all__ = [
    "ScenarioInvalid",
    "euclidean_comparison_distance",
    "hyperbolic_comparison_distance",
    "integrate_quadratic_ball",
    "integrate_quadratic_product_sphere",
    "integrate_quadratic_sphere",
    "known_checks",
    "quadrature_selftest",
    "run_scenario",
    "target_distance",
    "validate_scenario",
]

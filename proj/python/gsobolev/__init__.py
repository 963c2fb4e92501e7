"""Gaussian Sobolev checks on truncated l2."""

import json

from ._core import (
    Function,
    Weights,
    commands,
    hs_bound_check,
    run,
    sharpness_closed_form,
    sobolev_norm,
    truncation_n1,
)

__all__ = [
    "Function",
    "Weights",
    "commands",
    "hs_bound_check",
    "run",
    "run_report",
    "sharpness_closed_form",
    "sobolev_norm",
    "truncation_n1",
]


def run_report(command, **options):
    """Run a harness command and return the JSON report as a dict.

    Keyword names use underscores for dots, e.g. weights_kind="geometric".
    """
    opts = {k.replace("weights_", "weights."): str(v) for k, v in options.items()}
    opts["format"] = "json"
    return json.loads(run(command, opts))

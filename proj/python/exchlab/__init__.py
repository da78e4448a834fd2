"""Python access to the exchlab core and scenario runner."""

import json

from ._core import (
    ExchlabError,
    aharonov_bohm_phase,
    calcium_two_r0,
    commands,
    critical_splitting,
    equilibrium_distance,
    fringe,
    rotor_spectrum,
    thermal_visibility,
    zeeman_p_err,
    zeeman_residual_phase,
)

__all__ = [
    "ExchlabError",
    "aharonov_bohm_phase",
    "calcium_two_r0",
    "commands",
    "critical_splitting",
    "default_config",
    "equilibrium_distance",
    "fringe",
    "rotor_spectrum",
    "run",
    "thermal_visibility",
    "zeeman_p_err",
    "zeeman_residual_phase",
]


def default_config(command):
    return json.loads(_core._default_config(command))


def run(command, config=None, out="out", threads=1):
    """Run a scenario and return its manifest as a dict."""
    return json.loads(_core._run(command, json.dumps(config or {}), str(out), threads))


from . import _core  # noqa: E402

"""Norm-action resource bounds for non-Hermitian quantum evolution."""

import json as _json

from ._core import *  # noqa: F401,F403
from ._core import __version__, _run_audit_json, _run_sweep_json


def run_audit(config):
    """Audit a config dict; returns (report dict, exit code)."""
    text, code = _run_audit_json(_json.dumps(config))
    return _json.loads(text), code


def run_sweep(config, threads=1):
    """Run a sweep config dict; returns (CSV text, exit code)."""
    return _run_sweep_json(_json.dumps(config), threads)

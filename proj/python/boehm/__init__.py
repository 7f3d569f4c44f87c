"""Boehmians on open subsets of the real line."""

import json

from ._core import *  # noqa: F401,F403
from ._core import _from_descriptor, _run_scene, _run_suite


def boehmian(descriptor, domain, h=1e-3):
    """Build a class from a descriptor dict such as {"type": "dirac", "center": 0.0}."""
    return _from_descriptor(json.dumps(descriptor), domain, h)


def run_suite(suite_id, config=None):
    return _run_suite(suite_id, json.dumps(config) if config else "")


def run_scene(scene, config=None):
    """Returns (report dict, exit code)."""
    report, code = _run_scene(json.dumps(scene), json.dumps(config) if config else "")
    return json.loads(report), code

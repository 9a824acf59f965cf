"""Articulated-object 4D panoptic segmentation toolkit."""

import json

from . import _core
from ._core import (
    ArticError,
    farthest_point_sampling,
    l_canon,
    lovasz_softmax,
    lstq,
    s_assoc,
    s_cls,
    trajectory,
)

__version__ = _core.__version__


def generate(out, **options):
    """Render a dataset under `out`; returns the manifest as a dict."""
    return json.loads(_core.generate(str(out), **options))


def oracle_segment(dataset, out, **options):
    """Segment from ground-truth offsets, write predictions to `out`, return the report."""
    return json.loads(_core.oracle_segment(str(dataset), str(out), **options))


def evaluate(dataset, pred, strict_classes=False):
    return json.loads(_core.evaluate(str(dataset), str(pred), strict_classes))

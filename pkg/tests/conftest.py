import json
from pathlib import Path

import numpy as np
import pytest
from hypothesis import settings

from terraquad.terrain_model import validate

DATA = Path(__file__).resolve().parent / "data"
ROOT = Path(__file__).resolve().parent.parent

T0_PTS = [(0, 0), (1, 2), (3, 2), (4, 0)]
T4_PTS = [(0, 0), (1, 2), (2, 1.2), (3, 2), (4, 0)]
TRI_PTS = [(0, 0), (2, 2), (4, 0)]


@pytest.fixture
def T0():
    return validate(T0_PTS)


@pytest.fixture
def T4():
    return validate(T4_PTS)


@pytest.fixture
def TRI():
    return validate(TRI_PTS)


def load_golden():
    return json.loads((DATA / "golden.json").read_text())


def random_quad(rng, equal_tops: bool):
    """A random convex base-anchored quad; equal_tops gives a horizontal top side."""
    from terraquad.geometry_kernel import Point
    from terraquad.terrain_model import Quad, quad_shape_ok
    while True:
        a = rng.uniform(-5, 5)
        d = a + rng.uniform(0.5, 20)
        bx, cx = np.sort(rng.uniform(a, d, 2))
        hb = rng.uniform(0.1, 10)
        hc = hb if equal_tops else rng.uniform(0.1, 10)
        q = Quad(Point(a, 0.0), Point(bx, hb), Point(cx, hc), Point(d, 0.0))
        if quad_shape_ok(q) and cx - bx > 1e-3:
            return q


settings.register_profile("repro", derandomize=True, deadline=None, print_blob=True)
settings.load_profile("repro")

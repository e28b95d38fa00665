import math

import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from polarfix import linalg
from polarfix.gallery import simplex_vertices
from polarfix.sets import Ellipsoid, PolytopeH, PolytopeV

settings.register_profile(
    "polarfix", deadline=None, max_examples=40, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("polarfix")


def unit(v):
    v = np.asarray(v, dtype=float)
    return v / np.linalg.norm(v)


def random_polytope_v(rng, n, extra=None):
    """Random V-polytope with 0 well inside: a shrunken simplex plus random points."""
    extra = 2 * n + 2 if extra is None else extra
    Q = linalg.random_orthogonal(rng, n)
    core = simplex_vertices(n, rng.uniform(0.5, 1.5)) @ Q.T
    pts = rng.standard_normal((extra, n)) * rng.uniform(0.5, 2.0, size=(1, n))
    return PolytopeV(np.vstack([core, pts]))


def random_body(rng, n, kind=None):
    """Ellipsoid, V-polytope or (in 2D) H-polytope with 0 in the interior."""
    kind = kind or rng.choice(["ellipsoid", "polytope_v"] + (["polytope_h"] if n == 2 else []))
    if kind == "ellipsoid":
        return Ellipsoid(linalg.random_spd(rng, n, cond=50))
    P = random_polytope_v(rng, n)
    return P if kind == "polytope_v" else PolytopeH(P.vertices)


def random_bodies(seed, count=50, max_dim=6):
    rng = np.random.default_rng(seed)
    out = []
    for k in range(count):
        n = 2 + k % (max_dim - 1)
        out.append(random_body(rng, n, "ellipsoid" if k % 2 == 0 else "polytope_v"))
    return out


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


seeds = st.integers(min_value=0, max_value=2**32 - 1)
dims = st.integers(min_value=2, max_value=6)
angles = st.floats(min_value=0.0, max_value=2 * math.pi, allow_nan=False)


# acceptance gate: one line per criterion, collected by tests/test_acceptance.py
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {detail}")

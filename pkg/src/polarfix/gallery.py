"""Worked examples of ``C = (GC)°`` as ready-to-verify ``(G, sets)`` pairs.

Each entry carries the expected verdict for every set, so the gallery doubles
as a golden test corpus and as the catalogue behind ``polarfix gallery``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .config import DEFAULT, RunConfig
from .errors import BadParams, UnknownEntry, ZeroGamma
from .polarity import Operator, as_operator, pushforward
from .sets import INF, Ball, ConvexSet, Ellipsoid, Interval, LorentzCone, Orthant, PolytopeV, rhombus, square
from .solver import SemiSkewForm, classify_1d, solve_positive_definite
from .verify import ResidualReport, verify_fixed_point


@dataclass
class GalleryEntry:
    """A named example: operator, candidate sets and their expected verdicts.

    Attributes:
        name: Registry key.
        params: Parameters the entry was built with (after defaults).
        G: The operator of the equation.
        sets: Candidate sets, in the order of ``labels``/``expected``.
        expected: ``"pass"`` or ``"fail"`` per set.
        citation: Short human-readable provenance string.
        labels: Display name per set.
        extras: Entry-specific data (helper operators, witness values, ...).
    """

    name: str
    params: dict
    G: Operator
    sets: list
    expected: list
    citation: str
    labels: list = field(default_factory=list)
    extras: dict = field(default_factory=dict)

    def verify(self, config: RunConfig = DEFAULT) -> list[ResidualReport]:
        return [verify_fixed_point(self.G, C, config) for C in self.sets]

    def reproduces(self, config: RunConfig = DEFAULT) -> bool:
        return [r.verdict for r in self.verify(config)] == list(self.expected)

    def to_doc(self, config: RunConfig | None = None) -> dict:
        doc = {
            "name": self.name,
            "params": {k: _num(v) for k, v in self.params.items()},
            "operator": self.G.to_doc(),
            "sets": [{"label": lab, "set": C.to_doc(), "expected": e}
                     for lab, C, e in zip(self.labels, self.sets, self.expected)],
            "citation": self.citation,
        }
        if config is not None:
            for item, rep in zip(doc["sets"], self.verify(config)):
                item["report"] = rep.to_doc()
        return doc


def _num(v):
    if isinstance(v, (list, tuple)):
        return [_num(x) for x in v]
    if isinstance(v, (int, np.integer)) and not isinstance(v, bool):
        return int(v)
    return float(v) if isinstance(v, (float, Fraction, np.floating)) else v


# -- constructions -------------------------------------------------------------

def simplex_vertices(n: int, r: float = 1.0) -> np.ndarray:
    """Vertices (rows) of a regular simplex in ``R^n`` centred at 0 with circumradius ``r``.

    Built by lifting: the unit ``(n-1)``-simplex is shrunk by ``sqrt(1 - 1/n²)``
    and lowered to height ``-1/n`` under a new apex ``e_n``. Coordinates are
    finally reversed so that the first vertex is ``r e_1``.
    """
    if int(n) != n or n < 2:
        raise BadParams("simplex needs an integer n >= 2")
    if not r > 0:
        raise BadParams("circumradius must be positive")
    V = np.array([[1.0], [-1.0]])
    for k in range(2, int(n) + 1):
        s = math.sqrt(1.0 - 1.0 / k**2)
        lowered = np.column_stack([s * V, np.full(len(V), -1.0 / k)])
        apex = np.zeros((1, k))
        apex[0, -1] = 1.0
        V = np.vstack([apex, lowered])
    return r * V[:, ::-1]


def facet_correspondence_error(V: np.ndarray) -> float:
    """Largest violation of the vertex/facet pairing of a centred regular simplex.

    For each vertex ``v`` the opposite facet must have centroid ``-v/n`` and be
    orthogonal to ``v``.
    """
    V = np.asarray(V, dtype=float)
    n = V.shape[1]
    err = 0.0
    for i, v in enumerate(V):
        F = np.delete(V, i, axis=0)
        err = max(err, float(np.max(np.abs(F.mean(axis=0) + v / n))))
        edges = F[1:] - F[0]
        err = max(err, float(np.max(np.abs(edges @ v))))
    return err


def unbounded_ellipsoid_demo(n: int) -> dict:
    """Witnesses ``x_k = e_k / sqrt(lambda_k)`` for ``A = diag(1, 1/2, ..., 1/n)``.

    Each ``x_k`` lies on the ellipsoid ``<Ax, x> <= 1`` and has norm ``sqrt(k)``;
    as ``n`` grows the ellipsoid contains ever longer vectors, the finite
    trace of unboundedness once ``A`` loses a bounded inverse.
    """
    if int(n) != n or n < 2:
        raise BadParams("need an integer n >= 2")
    lam = 1.0 / np.arange(1, int(n) + 1)
    W = np.diag(1.0 / np.sqrt(lam))
    norms = np.linalg.norm(W, axis=1)
    return {
        "n": int(n),
        "eigenvalues": lam.tolist(),
        "witness_norms": norms.tolist(),
        "max_witness_norm": float(norms.max()),
        "on_boundary": bool(np.allclose(np.einsum("ij,j,ij->i", W, lam, W), 1.0)),
    }


def rotation_x3(alpha: float) -> np.ndarray:
    c, s = math.cos(alpha), math.sin(alpha)
    return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])


# -- entries ----------------------------------------------------------------------

def _int_param(p, key, lo):
    v = p[key]
    if int(v) != v or v < lo:
        raise BadParams(f"{key} must be an integer >= {lo}")
    return int(v)


def _pos_param(p, key):
    v = p[key]
    if not v > 0:
        raise BadParams(f"{key} must be positive")
    return v


def _lorentz(p):
    n = _int_param(p, "n", 2)
    # in the plane the quarter-aperture cone around the diagonal is the orthant
    axis = np.ones(2) / math.sqrt(2) if n == 2 else np.eye(n)[-1]
    return dict(G=Operator(-np.eye(n)), sets=[LorentzCone(axis)], expected=["pass"],
                labels=["lorentz"], citation="ice-cream cone under G = -I")


def _orthant(p):
    n = _int_param(p, "n", 2)
    return dict(G=Operator(-np.eye(n)), sets=[Orthant(np.ones(n))], expected=["pass"],
                labels=["orthant"], citation="nonnegative orthant under G = -I")


def _simplex(p):
    n = _int_param(p, "n", 2)
    V = simplex_vertices(n, math.sqrt(n))
    return dict(G=Operator(-np.eye(n)), sets=[PolytopeV(V)], expected=["pass"],
                labels=[f"S(sqrt({n}))"], citation="regular simplex of circumradius sqrt(n) under G = -I",
                extras={"facet_error": facet_correspondence_error(V)})


def _ellipse_family(p):
    lam = _pos_param(p, "lam")
    G = np.array([[0.0, 1.0], [-1.0, 0.0]])
    return dict(G=Operator(G), sets=[Ellipsoid(np.diag([lam**2, lam**-2]))], expected=["pass"],
                labels=[f"C({lam:g})"], citation="ellipse family under the quarter turn (x2, -x1)")


def _ellipse_family_2n(p):
    lams = [float(v) for v in np.atleast_1d(p["lams"])]
    if not lams or any(not v > 0 for v in lams):
        raise BadParams("lams must be a non-empty list of positive numbers")
    n = len(lams)
    G = np.kron(np.eye(n), np.array([[0.0, 1.0], [-1.0, 0.0]]))
    diag = np.ravel([[v**2, v**-2] for v in lams])
    return dict(G=Operator(G), sets=[Ellipsoid(np.diag(diag))], expected=["pass"],
                labels=["C(" + ", ".join(f"{v:g}" for v in lams) + ")"],
                citation="block ellipsoid under pairwise quarter turns")


def _square_rhombus_disc(p):
    c = 1.0 / math.sqrt(2.0)
    G = np.array([[c, c], [-c, c]])
    return dict(G=Operator(G), sets=[square(2**-0.25), rhombus(2**0.25), Ball(1.0, 2)],
                expected=["pass"] * 3, labels=["square", "rhombus", "disc"],
                citation="three distinct solutions for the scaled 45-degree rotation")


def _rotation_invariance(p):
    lam = _pos_param(p, "lam")
    alpha = float(p["alpha"])
    Gt = np.diag([1.0, 1.0, lam])
    C = solve_positive_definite(Gt)
    A = rotation_x3(alpha)
    return dict(G=Operator(Gt), sets=[C, pushforward(A, C)], expected=["pass", "pass"],
                labels=["C", "A C"], citation="rotation about x3 preserves the unique ellipsoid",
                extras={"A": A})


def _one_d(p):
    gamma = p["gamma"]
    fam = classify_1d(gamma)
    if fam.unique is not None:
        return dict(G=Operator.scalar(fam.gamma), sets=[fam.unique], expected=["pass"],
                    labels=["unique"], citation="1D classification, gamma > 0",
                    extras={"family": fam})
    b = _pos_param(p, "b")
    Cb = fam.member(b)
    bf = Cb.hi
    return dict(G=Operator.scalar(fam.gamma),
                sets=[Cb, *fam.rays, Interval(0, bf), Interval(-INF, bf)],
                expected=["pass", "pass", "pass", "fail", "fail"],
                labels=["C_b", "(-inf, 0]", "[0, inf)", "[0, b]", "(-inf, b]"],
                citation="1D classification, gamma < 0", extras={"family": fam})


def _f_b(p):
    from .conjugate import fb_function

    b = _pos_param(p, "b")
    fam = classify_1d(-1)
    Cb = fam.member(b)
    return dict(G=Operator.scalar(-1), sets=[Cb], expected=["pass"], labels=["C_b"],
                citation="f_b = gauge(C_b)^2 / 2 solves f(x) = f*(-x)",
                extras={"function": fb_function(float(b))})


def _unbounded_ellipsoid_demo(p):
    n = _int_param(p, "n", 2)
    demo = unbounded_ellipsoid_demo(n)
    G = np.diag(demo["eigenvalues"])
    return dict(G=Operator(G), sets=[Ellipsoid(G)], expected=["pass"], labels=["E_n"],
                citation="truncated l2 ellipsoid with eigenvalues 1/k", extras=demo)


def _semi_skew_nonexistence(p):
    a1, a2 = float(p["alpha1"]), float(p["alpha2"])
    try:
        form = SemiSkewForm(np.array([1.0, 0.0]), a1, a2)
    except ValueError as exc:
        raise BadParams(str(exc)) from None
    return dict(G=Operator(form.matrix), sets=[square(1.0), Ball(1.0, 2)], expected=["fail", "fail"],
                labels=["square", "disc"], citation="semi-skew operators admit no bounded solution",
                extras={"semi_skew": form})


_REGISTRY = {
    "lorentz": (_lorentz, {"n": 3}),
    "orthant": (_orthant, {"n": 3}),
    "simplex": (_simplex, {"n": 2}),
    "ellipse_family": (_ellipse_family, {"lam": 1.0}),
    "ellipse_family_2n": (_ellipse_family_2n, {"lams": [0.5, 3.0]}),
    "square_rhombus_disc": (_square_rhombus_disc, {}),
    "rotation_invariance": (_rotation_invariance, {"lam": 2.0, "alpha": math.pi / 3}),
    "one_d": (_one_d, {"gamma": -1, "b": 2}),
    "f_b": (_f_b, {"b": 2}),
    "unbounded_ellipsoid_demo": (_unbounded_ellipsoid_demo, {"n": 4}),
    "semi_skew_nonexistence": (_semi_skew_nonexistence, {"alpha1": 1.0, "alpha2": 2.0}),
}

ENTRY_NAMES = tuple(_REGISTRY)


def gallery(name: str, **params) -> GalleryEntry:
    """Build the gallery entry ``name``; ``params`` override its defaults.

    Raises:
        UnknownEntry: ``name`` is not registered.
        BadParams: unknown parameter names or invalid values.
    """
    if name not in _REGISTRY:
        raise UnknownEntry(f"unknown gallery entry {name!r}; known: {', '.join(ENTRY_NAMES)}")
    build, defaults = _REGISTRY[name]
    extra = set(params) - set(defaults)
    if extra:
        raise BadParams(f"{name} does not take {sorted(extra)}")
    p = {**defaults, **params}
    try:
        parts = build(p)
    except (TypeError, ValueError, ZeroGamma) as exc:
        raise BadParams(str(exc)) from None
    return GalleryEntry(name=name, params=p, **parts)

import numpy as np
import pytest

from levykit import Atoms, LevyTriplet, Power, PowerExp, RadialParametric, Sum


def atomic(points, masses, shift=0.0, cov=0.0):
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    if pts.shape[0] == 1 and len(masses) > 1:
        pts = pts.T
    d = pts.shape[1]
    shift = np.broadcast_to(np.asarray(shift, dtype=float), (d,))
    cov = np.asarray(cov, dtype=float) * np.eye(d) if np.ndim(cov) == 0 else cov
    return LevyTriplet(shift, cov, Atoms(pts, masses))


# ten atomic triplets used across modules: mixed radii on both sides of the unit sphere
ATOMIC_TRIPLETS = [
    atomic([[1.0]], [1.0]),
    atomic([[0.5]], [2.0], shift=0.3),
    atomic([[2.0]], [1.0], shift=-0.4, cov=0.5),
    atomic([[-3.0], [0.25]], [0.5, 1.5]),
    atomic([[0.9], [-1.1]], [1.0, 1.0], shift=1.0),
    atomic([[1.0]], [3.0], cov=2.0),
    atomic([[0.1], [10.0]], [5.0, 0.2], shift=-1.0),
    atomic([[1.0, 0.0], [0.0, -2.0]], [1.0, 0.7], shift=[0.2, -0.1]),
    atomic([[0.3, 0.4], [-1.5, 1.5]], [2.0, 0.3], cov=np.array([[1.0, 0.2], [0.2, 0.5]])),
    atomic([[0.5, -0.5, 0.5], [2.0, 1.0, -1.0]], [1.0, 0.4], shift=[0.1, 0.0, -0.2]),
]


def radial_triplet():
    fam = PowerExp(0.5, 1.0)
    return LevyTriplet([0.2], [[0.3]], RadialParametric([[1.0], [-1.0]], [1.0, 0.5], fam))


def mixed_triplet():
    M = Sum([Atoms([[2.0]], [0.5]), RadialParametric([[1.0]], [1.0], Power(0.5, 0.0, 1.0))])
    return LevyTriplet([0.0], [[0.0]], M)


@pytest.fixture(params=range(len(ATOMIC_TRIPLETS)), ids=lambda i: f"atomic{i}")
def atomic_triplet(request):
    return ATOMIC_TRIPLETS[request.param]


def grid_for(dim, k=20, seed=7, scale=2.0):
    rng = np.random.default_rng(seed)
    return rng.uniform(-scale, scale, size=(k, dim))

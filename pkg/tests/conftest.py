"""Shared fixtures: coarse grids and solves reused across test modules."""

import numpy as np
import pytest

import fluxlab as fl


@pytest.fixture(scope="session")
def annulus():
    """Symmetric annulus, coarse spacing: fast but fully featured."""
    spec = fl.DomainSpec(outer=fl.Disk(0, 0, 1.0), holes=(fl.Disk(0, 0, 0.3),), spacing=0.05)
    return fl.build_grid(spec)


@pytest.fixture(scope="session")
def annulus_half(annulus):
    return fl.aharonov_bohm_potential(annulus, [0.5])


@pytest.fixture(scope="session")
def annulus_half_solve(annulus, annulus_half):
    H = fl.assemble_magnetic(annulus, annulus_half)
    return H, fl.lowest_eigenpairs(H, 3, tol=1e-11)


@pytest.fixture(scope="session")
def annulus_cover(annulus, annulus_half):
    cov = fl.build_cover(fl.as_edge_graph(annulus, annulus_half))
    return cov, fl.build_theta(cov)


@pytest.fixture(scope="session")
def offset_annulus():
    """Annulus with an off-center hole: no central symmetry."""
    spec = fl.DomainSpec(outer=fl.Disk(0, 0, 1.0), holes=(fl.Disk(0.25, 0.1, 0.25),), spacing=0.05)
    return fl.build_grid(spec)


@pytest.fixture(scope="session")
def two_holes():
    spec = fl.DomainSpec(
        outer=fl.Rect(0, 0, 3.0, 1.0),
        holes=(fl.Disk(1.0, 0.5, 0.2), fl.Disk(2.0, 0.5, 0.2)),
        spacing=0.04,
    )
    return fl.build_grid(spec)


def winding_oracle(points, center):
    """Independent winding-number check by summed angle increments."""
    total = 0.0
    pts = list(points) + [points[0]]
    for (x0, y0), (x1, y1) in zip(pts, pts[1:]):
        a0 = np.arctan2(y0 - center[1], x0 - center[0])
        a1 = np.arctan2(y1 - center[1], x1 - center[0])
        d = a1 - a0
        while d > np.pi:
            d -= 2 * np.pi
        while d <= -np.pi:
            d += 2 * np.pi
        total += d
    return total / (2 * np.pi)

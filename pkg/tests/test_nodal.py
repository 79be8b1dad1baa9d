"""Nodal extraction and the slitting topology report."""

import numpy as np
import pytest

import fluxlab as fl
from fluxlab.errors import NoSignChange, PreconditionViolated
from fluxlab.nodal import NodalSet, _cell_mask


def ground_representatives(grid, flux_field, m=None, tol=1e-11):
    H = fl.assemble_magnetic(grid, flux_field)
    r = fl.lowest_eigenpairs(H, 4, tol=tol)
    if m is None:
        m = fl.multiplicity_estimate(r.eigenvalues, 1e-3)
    K = fl.conjugation_operator(grid, flux_field)
    reps = fl.real_representatives(r.eigenvectors[:, :m], K)
    cov = fl.build_cover(fl.as_edge_graph(grid, flux_field))
    th = fl.build_theta(cov)
    return r, reps, cov, th


def rasterize_polyline(grid, points):
    """Test-side cell rasterization of a polyline."""
    i0, j0, _, _ = grid._window
    h = grid.spacing
    cells = set()
    for p, q in zip(points, points[1:]):
        steps = max(2, int(np.hypot(*(np.asarray(q) - p)) / (0.2 * h)) + 2)
        for s in range(steps + 1):
            x, y = p + (np.asarray(q) - p) * (s / steps)
            cells.add((int(np.floor(x / h)) - i0, int(np.floor(y / h)) - j0))
    return cells


def test_annulus_single_radial_line(annulus, annulus_half, annulus_cover):
    _, reps, cov, th = ground_representatives(annulus, annulus_half)
    assert reps.shape[1] == 2
    for j in range(2):
        f = np.sqrt(2.0) * fl.lift_to_cover(reps[:, j], th).real
        nod = fl.extract_nodal_set(f, cov, annulus)
        assert nod.n_open == 1 and nod.n_closed == 0
        assert sorted(nod.endpoint_labels[0]) == [0, 1]
        rep = fl.topology_report(nod, annulus)
        assert rep.passes_slitting and rep.bounds_ok
        assert rep.cover_domain_count == 2
        # the line is roughly radial: endpoints at radii near 0.3 and 1
        r0 = np.hypot(*nod.polylines[0][0])
        r1 = np.hypot(*nod.polylines[0][-1])
        assert abs(min(r0, r1) - 0.3) < 0.12 and abs(max(r0, r1) - 1.0) < 0.12


def test_two_hole_slitting(two_holes):
    f = fl.aharonov_bohm_potential(two_holes, [0.5, 0.5])
    r, reps, cov, th = ground_representatives(two_holes, f)
    assert fl.multiplicity_estimate(r.eigenvalues, 1e-3) <= 3  # never above k+1
    for j in range(reps.shape[1]):
        nod = fl.extract_nodal_set(np.sqrt(2.0) * fl.lift_to_cover(reps[:, j], th).real, cov, two_holes)
        rep = fl.topology_report(nod, two_holes)
        assert rep.passes_slitting
        assert rep.bounds_ok  # 1 <= n <= 2
        assert rep.cover_domain_count == 2
        assert rep.passes_slitting == (rep.cover_domain_count == 2)


def test_projection_consistency(annulus, annulus_half, annulus_cover):
    _, reps, cov, th = ground_representatives(annulus, annulus_half)
    f = np.sqrt(2.0) * fl.lift_to_cover(reps[:, 0], th).real
    a = fl.extract_nodal_set(f, cov, annulus, anchor_sheet=0)
    b = fl.extract_nodal_set(f, cov, annulus, anchor_sheet=1)
    assert a.crossed_cells == b.crossed_cells


def test_empty_nodal_set_fails_parity(annulus, annulus_cover):
    cov, _ = annulus_cover
    empty = NodalSet(polylines=[], endpoint_labels=[], crossed_cells=frozenset(), cover=cov)
    rep = fl.topology_report(empty, annulus)
    assert not rep.parity_ok
    assert not rep.passes_slitting
    assert rep.complement_connected  # nothing removed
    assert rep.cover_domain_count == 1  # connected cover stays whole


def test_two_radial_lines_disconnect(annulus, annulus_cover):
    cov, _ = annulus_cover
    lines = []
    for ang in (0.3, 2.1):
        ts = np.linspace(0.3, 1.0, 30)
        lines.append(np.column_stack([ts * np.cos(ang), ts * np.sin(ang)]))
    cells = set()
    for line in lines:
        cells |= rasterize_polyline(annulus, line)
    synth = NodalSet(
        polylines=lines,
        endpoint_labels=[(1, 0), (1, 0)],
        crossed_cells=frozenset(cells),
        cover=cov,
    )
    rep = fl.topology_report(synth, annulus)
    assert not rep.complement_connected
    assert not rep.parity_ok  # two lines at the hole: even
    assert not rep.passes_slitting


def test_removing_a_line_breaks_parity(annulus, annulus_half, two_holes):
    # one-hole case: the extracted single line removed leaves nothing
    _, reps, cov, th = ground_representatives(annulus, annulus_half)
    nod = fl.extract_nodal_set(np.sqrt(2.0) * fl.lift_to_cover(reps[:, 0], th).real, cov, annulus)
    assert fl.topology_report(nod, annulus).passes_slitting
    stripped = NodalSet(polylines=[], endpoint_labels=[], crossed_cells=frozenset(), cover=cov)
    assert not fl.topology_report(stripped, annulus).passes_slitting

    # two-hole case: drop each line of a passing set in turn
    f2 = fl.aharonov_bohm_potential(two_holes, [0.5, 0.5])
    _, reps2, cov2, th2 = ground_representatives(two_holes, f2)
    nod2 = fl.extract_nodal_set(np.sqrt(2.0) * fl.lift_to_cover(reps2[:, 0], th2).real, cov2, two_holes)
    assert fl.topology_report(nod2, two_holes).passes_slitting
    for drop in range(len(nod2.polylines)):
        keep = [t for t in range(len(nod2.polylines)) if t != drop]
        sub = NodalSet(
            polylines=[nod2.polylines[t] for t in keep],
            endpoint_labels=[nod2.endpoint_labels[t] for t in keep],
            crossed_cells=frozenset().union(
                *[rasterize_polyline(two_holes, nod2.polylines[t]) for t in keep]
            )
            if keep
            else frozenset(),
            cover=cov2,
        )
        assert not fl.topology_report(sub, two_holes).parity_ok


def test_degenerate_pair_check_annulus(annulus, annulus_half):
    r, reps, cov, th = ground_representatives(annulus, annulus_half)
    ok = fl.degenerate_pair_check(
        reps[:, 0], reps[:, 1], annulus, cov, theta=th, eigenvalues=r.eigenvalues
    )
    assert ok


def test_degenerate_pair_check_rejects_identical(annulus, annulus_half):
    r, reps, cov, th = ground_representatives(annulus, annulus_half)
    with pytest.raises(PreconditionViolated):
        fl.degenerate_pair_check(reps[:, 0], reps[:, 0], annulus, cov, theta=th)


def test_extraction_requires_antisymmetry(annulus, annulus_cover):
    cov, _ = annulus_cover
    f = np.ones(2 * annulus.n_vertices)
    with pytest.raises(PreconditionViolated):
        fl.extract_nodal_set(f, cov, annulus)
    with pytest.raises(NoSignChange):
        fl.extract_nodal_set(np.zeros(2 * annulus.n_vertices), cov, annulus)


def test_circle_single_zero_point():
    n = 64
    cg = fl.circle_graph(n, 0.5)
    cov = fl.build_cover(cg)
    th = fl.build_theta(cov)
    H = fl.assemble_circle(n, 0.5)
    r = fl.lowest_eigenpairs(H, 2, tol=1e-12)
    K = fl.ConjugationOperator(cg)
    reps = fl.real_representatives(r.eigenvectors[:, :2], K)
    zeros = []
    for j in range(2):
        lift = fl.lift_to_cover(reps[:, j], th)
        assert np.max(np.abs(lift.imag)) < 1e-8
        pts = fl.circle_zero_points(lift.real, cov)
        assert pts.shape == (1,)
        zeros.append(pts[0])
    # orthogonal representatives have antipodal zeros
    d = abs(zeros[0] - zeros[1])
    assert abs(min(d, 2 * np.pi - d) - np.pi) < 2 * np.pi / n


def test_polylines_text(tmp_path, annulus, annulus_half):
    _, reps, cov, th = ground_representatives(annulus, annulus_half)
    nod = fl.extract_nodal_set(np.sqrt(2.0) * fl.lift_to_cover(reps[:, 0], th).real, cov, annulus)
    p = tmp_path / "lines.txt"
    fl.nodal.polylines_text(nod, p)
    text = p.read_text()
    assert text.startswith("# line endpoints")
    assert len([l for l in text.splitlines() if l and not l.startswith("#")]) == len(nod.polylines[0])


def test_report_json_line(annulus, annulus_half):
    import json

    _, reps, cov, th = ground_representatives(annulus, annulus_half)
    nod = fl.extract_nodal_set(np.sqrt(2.0) * fl.lift_to_cover(reps[:, 0], th).real, cov, annulus)
    rep = fl.topology_report(nod, annulus)
    d = json.loads(rep.to_json_line())
    assert d["n_lines"] == 1 and d["passes_slitting"] is True
    # endpoint conservation: classified + unclassified endpoints = 2 per line
    total = sum(rep.endpoints_per_component.values()) + rep.unclassified_endpoints
    assert total == 2 * rep.n_lines

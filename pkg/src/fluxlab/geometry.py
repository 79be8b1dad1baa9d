"""Lattice discretization of planar domains with holes.

A domain is an outer shape (disk or axis-aligned rectangle) minus k open
holes (disks or rectangles).  Vertices live on the square lattice h*Z^2;
a vertex is active iff it lies in the closed outer shape and outside every
open hole.  Edges are 4-neighbor pairs of active vertices.  Boundary
vertices are labeled by the boundary component they touch: 0 for the outer
boundary, 1..k for the holes.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import ndimage

from .errors import DisconnectedDomain, NoSuchHole, SpecTooCoarse

# containment tolerance: keeps lattice points that land on the analytic
# boundary (e.g. 150*0.02 vs 3.0) inside the closed shape
EPS = 1e-9


@dataclass(frozen=True)
class Disk:
    cx: float
    cy: float
    r: float

    def contains(self, x, y, closed=True):
        d2 = (x - self.cx) ** 2 + (y - self.cy) ** 2
        r2 = self.r**2
        return d2 <= r2 + EPS if closed else d2 < r2 - EPS

    def bbox(self):
        return (self.cx - self.r, self.cy - self.r, self.cx + self.r, self.cy + self.r)

    def reference_point(self):
        return (self.cx, self.cy)


@dataclass(frozen=True)
class Rect:
    x0: float
    y0: float
    x1: float
    y1: float

    def __post_init__(self):
        if self.x1 < self.x0 or self.y1 < self.y0:
            raise ValueError("rectangle corners must be ordered")

    def contains(self, x, y, closed=True):
        if closed:
            return (
                (x >= self.x0 - EPS)
                & (x <= self.x1 + EPS)
                & (y >= self.y0 - EPS)
                & (y <= self.y1 + EPS)
            )
        return (
            (x > self.x0 + EPS)
            & (x < self.x1 - EPS)
            & (y > self.y0 + EPS)
            & (y < self.y1 - EPS)
        )

    def bbox(self):
        return (self.x0, self.y0, self.x1, self.y1)

    def reference_point(self):
        return (0.5 * (self.x0 + self.x1), 0.5 * (self.y0 + self.y1))


def _point_rect_distance(px, py, rect):
    dx = max(rect.x0 - px, px - rect.x1, 0.0)
    dy = max(rect.y0 - py, py - rect.y1, 0.0)
    return math.hypot(dx, dy)


def shape_gap(a, b):
    """Euclidean distance between the closures of two hole shapes."""
    if isinstance(a, Disk) and isinstance(b, Disk):
        return math.hypot(a.cx - b.cx, a.cy - b.cy) - a.r - b.r
    if isinstance(a, Disk) and isinstance(b, Rect):
        return _point_rect_distance(a.cx, a.cy, b) - a.r
    if isinstance(a, Rect) and isinstance(b, Disk):
        return shape_gap(b, a)
    dx = max(b.x0 - a.x1, a.x0 - b.x1, 0.0)
    dy = max(b.y0 - a.y1, a.y0 - b.y1, 0.0)
    if dx == 0.0 and dy == 0.0:
        return -1.0  # overlapping rectangles
    return math.hypot(dx, dy)


def outer_margin(outer, hole):
    """Distance from a hole's closure to the outer boundary (hole assumed inside)."""
    if isinstance(outer, Rect):
        if isinstance(hole, Disk):
            return min(
                hole.cx - hole.r - outer.x0,
                outer.x1 - hole.cx - hole.r,
                hole.cy - hole.r - outer.y0,
                outer.y1 - hole.cy - hole.r,
            )
        return min(
            hole.x0 - outer.x0,
            outer.x1 - hole.x1,
            hole.y0 - outer.y0,
            outer.y1 - hole.y1,
        )
    if isinstance(hole, Disk):
        return outer.r - (math.hypot(hole.cx - outer.cx, hole.cy - outer.cy) + hole.r)
    corners = [(hole.x0, hole.y0), (hole.x1, hole.y0), (hole.x0, hole.y1), (hole.x1, hole.y1)]
    return outer.r - max(math.hypot(cx - outer.cx, cy - outer.cy) for cx, cy in corners)


@dataclass(frozen=True)
class DomainSpec:
    """Analytic description of a domain: outer shape, holes, grid step."""

    outer: object
    holes: tuple = ()
    spacing: float = 0.05

    def __post_init__(self):
        object.__setattr__(self, "holes", tuple(self.holes))
        if self.spacing <= 0:
            raise ValueError("spacing must be positive")

    @property
    def k(self):
        return len(self.holes)

    def validate(self):
        """Check the analytic invariants; raise SpecTooCoarse on violation."""
        h = self.spacing
        for hole in self.holes:
            if outer_margin(self.outer, hole) < 3 * h:
                raise SpecTooCoarse(
                    f"gap between hole {hole} and the outer boundary is below 3h"
                )
        for a, b in itertools.combinations(self.holes, 2):
            if shape_gap(a, b) < 3 * h:
                raise SpecTooCoarse(f"gap between holes {a} and {b} is below 3h")


@dataclass(frozen=True)
class LatticeLoop:
    """Closed path of directed lattice edges, (tail, head) vertex indices."""

    edges: tuple
    orientation: int = 1

    def __post_init__(self):
        for (_, h0), (t1, _) in zip(self.edges, self.edges[1:]):
            if h0 != t1:
                raise ValueError("loop edges must chain head-to-tail")
        if self.edges and self.edges[-1][1] != self.edges[0][0]:
            raise ValueError("loop must close")

    def vertices(self):
        return [e[0] for e in self.edges]


@dataclass
class GridDomain:
    """Immutable lattice discretization of a DomainSpec.

    Vertices are stored in lexicographic (i, j) order; coordinates are
    ij * spacing.  Edges are canonical: each edge points in the +x or +y
    direction, x-edges first.
    """

    spec: DomainSpec
    spacing: float
    ij: np.ndarray            # (n, 2) lattice indices
    xy: np.ndarray            # (n, 2) physical coordinates
    edges: np.ndarray         # (m, 2) vertex indices, canonical direction
    boundary_labels: np.ndarray  # (n,) component label, -1 for interior
    hole_refs: np.ndarray     # (k, 2) interior reference points
    # internal rasters on the padded index window
    _window: tuple = field(repr=False, default=None)       # (i0, j0, ni, nj)
    _active: np.ndarray = field(repr=False, default=None)  # (ni, nj) bool
    _excl: np.ndarray = field(repr=False, default=None)    # (ni, nj) region label
    _vid: np.ndarray = field(repr=False, default=None)     # (ni, nj) vertex id or -1
    _edge_index: dict = field(repr=False, default=None)

    @property
    def n_vertices(self):
        return self.ij.shape[0]

    @property
    def n_edges(self):
        return self.edges.shape[0]

    @property
    def k(self):
        return len(self.hole_refs)

    def edge_id(self, v, w):
        """Edge index and direction sign for the directed edge v -> w."""
        e = self._edge_index.get((v, w))
        if e is not None:
            return e, 1
        e = self._edge_index.get((w, v))
        if e is not None:
            return e, -1
        return None, 0

    def neighbors(self, v):
        i, j = self.ij[v]
        i0, j0, ni, nj = self._window
        out = []
        for di, dj in ((1, 0), (-1, 0), (0, 1), (0, -1)):
            a, b = i - i0 + di, j - j0 + dj
            if 0 <= a < ni and 0 <= b < nj and self._vid[a, b] >= 0:
                out.append(self._vid[a, b])
        return out

    def boundary_vertices(self, component=None):
        mask = self.boundary_labels >= 0
        if component is not None:
            mask = self.boundary_labels == component
        return np.nonzero(mask)[0]


def wrap_angle(d):
    """Wrap angle difference(s) into (-pi, pi]."""
    return d - 2.0 * np.pi * np.round(d / (2.0 * np.pi))


def winding_number(points, center):
    """Winding of a closed polygonal path around a point, by summed angle increments."""
    pts = np.asarray(points, dtype=float)
    ang = np.arctan2(pts[:, 1] - center[1], pts[:, 0] - center[0])
    inc = wrap_angle(np.diff(np.concatenate([ang, ang[:1]])))
    return float(np.sum(inc) / (2.0 * np.pi))


def build_grid(spec: DomainSpec) -> GridDomain:
    """Discretize a DomainSpec on the lattice spacing*Z^2.

    Raises SpecTooCoarse when a hole fails to swallow a full lattice cell or
    a gap is narrower than three cells, DisconnectedDomain when the active
    set splits.
    """
    spec.validate()
    h = spec.spacing
    xmin, ymin, xmax, ymax = spec.outer.bbox()
    i0 = math.floor(xmin / h) - 2
    i1 = math.ceil(xmax / h) + 2
    j0 = math.floor(ymin / h) - 2
    j1 = math.ceil(ymax / h) + 2
    ni, nj = i1 - i0 + 1, j1 - j0 + 1

    ii, jj = np.meshgrid(np.arange(i0, i1 + 1), np.arange(j0, j1 + 1), indexing="ij")
    xx, yy = ii * h, jj * h
    active = spec.outer.contains(xx, yy, closed=True)
    for hole in spec.holes:
        active &= ~hole.contains(xx, yy, closed=False)

    if not active.any():
        raise SpecTooCoarse("no lattice point falls inside the domain")

    # connectivity of the active set (4-neighbor)
    lab, nlab = ndimage.label(active)
    if nlab != 1:
        raise DisconnectedDomain(f"active set splits into {nlab} components")

    # label excluded regions with 8-connectivity; the region containing the
    # padded border is the outer region (label 0)
    excl_lab, n_excl = ndimage.label(~active, structure=np.ones((3, 3), dtype=bool))
    excl = np.full((ni, nj), -1, dtype=np.int16)
    outer_region = excl_lab[0, 0]
    region_of_hole = {}
    for r in range(1, n_excl + 1):
        if r == outer_region:
            excl[excl_lab == r] = 0
            continue
        a, b = np.argwhere(excl_lab == r)[0]
        x, y = (a + i0) * h, (b + j0) * h
        for idx, hole in enumerate(spec.holes):
            if hole.contains(x, y, closed=True):
                if idx in region_of_hole:
                    raise SpecTooCoarse(f"hole {idx + 1} resolves to several regions")
                region_of_hole[idx] = r
                excl[excl_lab == r] = idx + 1
                break
        else:
            raise SpecTooCoarse("an excluded region matches no hole")
    if len(region_of_hole) != spec.k:
        raise SpecTooCoarse("a hole contains no excluded lattice point")

    # every hole must contain at least one fully excluded cell
    for idx in range(spec.k):
        m = excl == idx + 1
        cells = m[:-1, :-1] & m[1:, :-1] & m[:-1, 1:] & m[1:, 1:]
        if not cells.any():
            raise SpecTooCoarse(f"hole {idx + 1} contains no fully excluded cell")

    # vertex table in lexicographic (i, j) order
    vid = np.full((ni, nj), -1, dtype=np.int64)
    aw, bw = np.nonzero(active)
    vid[aw, bw] = np.arange(aw.size)
    ij = np.column_stack([aw + i0, bw + j0]).astype(np.int64)
    xy = ij * h

    # canonical edges: +x then +y
    ex = active[:-1, :] & active[1:, :]
    ey = active[:, :-1] & active[:, 1:]
    exa, exb = np.nonzero(ex)
    eya, eyb = np.nonzero(ey)
    edges = np.concatenate(
        [
            np.column_stack([vid[exa, exb], vid[exa + 1, exb]]),
            np.column_stack([vid[eya, eyb], vid[eya, eyb + 1]]),
        ]
    )
    edge_index = {(int(a), int(b)): e for e, (a, b) in enumerate(edges)}

    # boundary labels from the excluded region touching each active vertex
    labels = np.full(aw.size, -1, dtype=np.int16)
    for di, dj in ((1, 0), (-1, 0), (0, 1), (0, -1)):
        na, nb = aw + di, bw + dj
        ok = (na >= 0) & (na < ni) & (nb >= 0) & (nb < nj)
        reg = np.full(aw.size, -1, dtype=np.int16)
        reg[ok] = excl[na[ok], nb[ok]]
        hit = reg >= 0
        clash = hit & (labels >= 0) & (labels != reg)
        if clash.any():
            raise SpecTooCoarse("a vertex touches two boundary components")
        labels[hit] = reg[hit]

    hole_refs = np.array([hole.reference_point() for hole in spec.holes], dtype=float)
    grid = GridDomain(
        spec=spec,
        spacing=h,
        ij=ij,
        xy=xy,
        edges=edges,
        boundary_labels=labels,
        hole_refs=hole_refs.reshape(spec.k, 2),
        _window=(i0, j0, ni, nj),
        _active=active,
        _excl=excl,
        _vid=vid,
        _edge_index=edge_index,
    )
    return grid


# directed boundary edges around a cell blob, region kept on the left (CCW)
_SIDE_EDGES = {
    "S": lambda a, b: ((a, b), (a + 1, b)),
    "E": lambda a, b: ((a + 1, b), (a + 1, b + 1)),
    "N": lambda a, b: ((a + 1, b + 1), (a, b + 1)),
    "W": lambda a, b: ((a, b + 1), (a, b)),
}


def hole_loop(grid: GridDomain, i: int) -> LatticeLoop:
    """Lattice cycle encircling hole i (1-based) once anticlockwise.

    The loop is the anticlockwise boundary of the one-cell dilation of the
    hole's excluded region, so it winds +1 around hole i and 0 around the
    others.
    """
    if not 1 <= i <= grid.k:
        raise NoSuchHole(f"hole index {i} outside 1..{grid.k}")
    i0, j0, ni, nj = grid._window
    m = grid._excl == i
    bad = m[:-1, :-1] | m[1:, :-1] | m[:-1, 1:] | m[1:, 1:]

    out_edges = {}
    ba, bb = np.nonzero(bad)
    for a, b in zip(ba, bb):
        for side, nbr in (("S", (a, b - 1)), ("E", (a + 1, b)), ("N", (a, b + 1)), ("W", (a - 1, b))):
            na, nb = nbr
            inside = 0 <= na < bad.shape[0] and 0 <= nb < bad.shape[1]
            if inside and bad[na, nb]:
                continue
            tail, head = _SIDE_EDGES[side](a, b)
            out_edges.setdefault(tail, []).append(head)

    start = min(out_edges)
    walk = [start]
    prev_dir = None
    cur = start
    # prefer the sharpest left turn at (rare) pinch vertices
    left_pref = {(1, 0): [(0, 1), (1, 0), (0, -1)], (-1, 0): [(0, -1), (-1, 0), (0, 1)],
                 (0, 1): [(-1, 0), (0, 1), (1, 0)], (0, -1): [(1, 0), (0, -1), (-1, 0)]}
    while True:
        heads = out_edges[cur]
        if len(heads) == 1 or prev_dir is None:
            nxt = heads[0]
        else:
            for d in left_pref[prev_dir]:
                cand = (cur[0] + d[0], cur[1] + d[1])
                if cand in heads:
                    nxt = cand
                    break
            else:
                nxt = heads[0]
        heads.remove(nxt)
        prev_dir = (nxt[0] - cur[0], nxt[1] - cur[1])
        cur = nxt
        if cur == start:
            break
        walk.append(cur)

    vids = [int(grid._vid[a, b]) for a, b in walk]
    if any(v < 0 for v in vids):
        raise SpecTooCoarse(f"loop around hole {i} leaves the active set")
    loop_edges = tuple((vids[t], vids[(t + 1) % len(vids)]) for t in range(len(vids)))
    loop = LatticeLoop(edges=loop_edges, orientation=1)

    pts = grid.xy[vids]
    for j, ref in enumerate(grid.hole_refs):
        w = winding_number(pts, ref)
        want = 1.0 if j == i - 1 else 0.0
        if abs(w - want) > 0.25:
            raise SpecTooCoarse(f"loop around hole {i} winds {w:.3f} about hole {j + 1}")
    return loop


def dump_geometry(grid: GridDomain, path):
    """Plain-text vertex/edge listing for debugging."""
    with open(path, "w") as f:
        f.write(f"# vertices {grid.n_vertices} edges {grid.n_edges} holes {grid.k}\n")
        f.write("# vertex i j x y boundary_label\n")
        for v in range(grid.n_vertices):
            i, j = grid.ij[v]
            x, y = grid.xy[v]
            f.write(f"v {v} {i} {j} {x!r} {y!r} {grid.boundary_labels[v]}\n")
        f.write("# edge tail head\n")
        for a, b in grid.edges:
            f.write(f"e {a} {b}\n")

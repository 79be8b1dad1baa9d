"""Twofold covering lattice for half-integer circulations.

The cover doubles every vertex into sheets 0 and 1.  A spanning tree of the
base graph never changes sheet; a non-tree edge crosses sheets exactly when
the fundamental cycle it closes carries half-integer circulation.  On the
resulting graph every cycle has integer circulation, so the lifted link
phases integrate to a vertex phase that is single-valued mod 2*pi and flips
sign between sheets.  Multiplying by that phase turns the magnetic problem
into a real one: the magnetic spectrum is the antisymmetric part of the
spectrum of the plain lifted Laplacian.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

import numpy as np
from scipy import sparse

from .errors import (
    DegenerateProjection,
    DisconnectedCover,
    DisconnectedDomain,
    InconsistentHolonomy,
    NonHalfIntegerFlux,
)
from .operators import EdgeGraph, HamiltonianMatrix, assemble

TWO_PI = 2.0 * np.pi


def spanning_tree(graph: EdgeGraph):
    """BFS spanning tree from vertex 0 with sorted neighbor order.

    Returns (order, parent_vertex, parent_edge, parent_sign, is_tree_edge).
    Deterministic; raises DisconnectedDomain if the graph is disconnected.
    """
    adj = graph.adjacency()
    parent = np.full(graph.n, -1, dtype=np.int64)
    parent_edge = np.full(graph.n, -1, dtype=np.int64)
    parent_sign = np.zeros(graph.n, dtype=np.int8)
    seen = np.zeros(graph.n, dtype=bool)
    is_tree = np.zeros(graph.edges.shape[0], dtype=bool)
    order = []
    q = deque([0])
    seen[0] = True
    while q:
        v = q.popleft()
        order.append(v)
        for w, e, sign in adj[v]:
            if not seen[w]:
                seen[w] = True
                parent[w] = v
                parent_edge[w] = e
                parent_sign[w] = sign
                is_tree[e] = True
                q.append(w)
    if not seen.all():
        raise DisconnectedDomain("graph is not connected")
    return order, parent, parent_edge, parent_sign, is_tree


def tree_potential(graph: EdgeGraph, tree=None) -> np.ndarray:
    """Integral of the link phases along the spanning tree, rooted at 0."""
    order, parent, parent_edge, parent_sign, _ = tree or spanning_tree(graph)
    eta = np.zeros(graph.n)
    for v in order[1:]:
        eta[v] = eta[parent[v]] + parent_sign[v] * graph.theta[parent_edge[v]]
    return eta


@dataclass
class CoverGraph:
    """Twofold cover of a phased graph, cut edges chosen by cycle parity."""

    base: EdgeGraph
    cuts: np.ndarray        # (m,) bool, True where the edge crosses sheets
    connected: bool
    circulations: np.ndarray  # (m,) fundamental-cycle circulation per edge (0 on tree edges)
    _cover_edges: np.ndarray = field(default=None, repr=False)

    @property
    def n_base(self):
        return self.base.n

    @property
    def n(self):
        return 2 * self.base.n

    @property
    def is_trivial(self):
        return not self.connected

    def deck(self, x):
        """Sheet-swapping involution."""
        return (np.asarray(x) + self.base.n) % self.n

    def project(self, x):
        return np.asarray(x) % self.base.n

    def cover_edges(self) -> np.ndarray:
        """(2m, 2) lifted edges; lift j and lift j+m come from base edge j."""
        if self._cover_edges is None:
            n = self.base.n
            a, b = self.base.edges[:, 0], self.base.edges[:, 1]
            c = self.cuts.astype(np.int64)
            e0 = np.column_stack([a, b + n * c])
            e1 = np.column_stack([a + n, b + n * (1 - c)])
            self._cover_edges = np.concatenate([e0, e1])
        return self._cover_edges

    def as_edge_graph(self, zero_phase=False) -> EdgeGraph:
        theta = np.zeros(2 * self.base.theta.size) if zero_phase else np.tile(self.base.theta, 2)
        return EdgeGraph(n=self.n, edges=self.cover_edges(), theta=theta, spacing=self.base.spacing)


def build_cover(base: EdgeGraph, tol: float = 1e-9) -> CoverGraph:
    """Construct the cover determined by the link phases.

    Every fundamental-cycle circulation must be an integer or half-integer
    within tol, else NonHalfIntegerFlux.  The cover is connected iff some
    cycle is genuinely half-integer; all-integer circulations give the
    trivial two-copy cover.
    """
    tree = spanning_tree(base)
    eta = tree_potential(base, tree)
    is_tree = tree[4]
    a, b = base.edges[:, 0], base.edges[:, 1]
    circ = (eta[a] + base.theta - eta[b]) / TWO_PI
    circ[is_tree] = 0.0
    doubled = 2.0 * circ
    off = np.abs(doubled - np.round(doubled))
    if np.any(off > 2 * tol):
        worst = int(np.argmax(off))
        raise NonHalfIntegerFlux(
            f"cycle through edge {worst} has circulation {circ[worst]:.9f}"
        )
    cuts = np.abs(np.round(doubled).astype(np.int64)) % 2 == 1
    return CoverGraph(base=base, cuts=cuts, connected=bool(cuts.any()), circulations=circ)


@dataclass
class CoverPhase:
    """Vertex phase on the cover whose gradient matches the lifted link field.

    Single-valued mod 2*pi by construction of the cover; exp(i*values) flips
    sign under the deck map.
    """

    cover: CoverGraph
    values: np.ndarray  # (2n,) radians

    def antisymmetry_defect(self) -> float:
        z = np.exp(1j * self.values)
        return float(np.max(np.abs(z[self.cover.deck(np.arange(self.cover.n))] + z)))


def build_theta(cover: CoverGraph, tol: float = 1e-10) -> CoverPhase:
    """Integrate the lifted link phases along a spanning tree of the cover."""
    if not cover.connected:
        raise DisconnectedCover("trivial cover: phases integrate per copy, not across sheets")
    cg = cover.as_edge_graph()
    tree = spanning_tree(cg)
    values = tree_potential(cg, tree)
    is_tree = tree[4]
    a, b = cg.edges[:, 0], cg.edges[:, 1]
    mism = values[a] + cg.theta - values[b]
    mism = mism[~is_tree]
    off = np.abs(mism - TWO_PI * np.round(mism / TWO_PI))
    if off.size and off.max() > tol:
        raise InconsistentHolonomy(f"cycle phase mismatch up to {off.max():.3e} rad")
    phase = CoverPhase(cover=cover, values=values)
    if phase.antisymmetry_defect() > max(tol, 1e-10):
        raise InconsistentHolonomy("cover phase does not flip sign between sheets")
    return phase


def lift_to_cover(u, phase: CoverPhase) -> np.ndarray:
    """Isometry onto antisymmetric cover functions.

    (Lu)(x) = exp(-i*theta(x)) * u(project(x)) / sqrt(2).  The negative
    exponent pairs with the -exp(-i*theta) hop convention of the assembly,
    so eigenvectors of the magnetic operator map to eigenvectors of the
    lifted non-magnetic operator.
    """
    u = np.asarray(u).reshape(-1)
    n = phase.cover.n_base
    if u.size != n:
        raise ValueError(f"expected {n} values, got {u.size}")
    return np.exp(-1j * phase.values) * np.tile(u, 2) / np.sqrt(2.0)


def assemble_lifted(cover: CoverGraph, V=None) -> HamiltonianMatrix:
    """Real Neumann Laplacian plus lifted potential on the cover."""
    if V is not None:
        V = np.asarray(V, dtype=float).reshape(-1)
        if V.size == cover.n_base:
            V = np.tile(V, 2)
    return assemble(cover.as_edge_graph(zero_phase=True), V=V, bc="cover-neumann")


def antisymmetric_block(cover: CoverGraph, V=None) -> HamiltonianMatrix:
    """Lifted operator restricted to antisymmetric functions.

    In the explicit basis (delta(v,0) - delta(v,1))/sqrt(2) the operator
    lives on the base vertex set with the hop sign flipped on cut edges.
    Its spectrum is the magnetic spectrum, as a real symmetric problem.
    """
    base = cover.base
    n = base.n
    if V is None:
        V = np.zeros(n)
    else:
        V = np.asarray(V, dtype=float).reshape(-1)
        V = np.full(n, V[0]) if V.size == 1 else V
    inv_h2 = 1.0 / base.spacing**2
    deg = np.zeros(n)
    np.add.at(deg, base.edges[:, 0], 1.0)
    np.add.at(deg, base.edges[:, 1], 1.0)
    a, b = base.edges[:, 0], base.edges[:, 1]
    hop = np.where(cover.cuts, inv_h2, -inv_h2)
    rows = np.concatenate([a, b, np.arange(n)])
    cols = np.concatenate([b, a, np.arange(n)])
    vals = np.concatenate([hop, hop, deg * inv_h2 + V])
    mat = sparse.csr_matrix((vals, (rows, cols)), shape=(n, n))
    mat.sum_duplicates()
    return HamiltonianMatrix(
        matrix=mat,
        vertex_of_unknown=np.arange(n),
        unknown_of_vertex=np.arange(n),
        bc="cover-antisymmetric",
        spacing=base.spacing,
    )


def symmetric_block(cover: CoverGraph, V=None) -> HamiltonianMatrix:
    """Lifted operator restricted to symmetric functions: the zero-flux base operator."""
    base = cover.base
    graph = EdgeGraph(n=base.n, edges=base.edges, theta=np.zeros(base.theta.size), spacing=base.spacing)
    return assemble(graph, V=V, bc="cover-symmetric")


class ConjugationOperator:
    """Antilinear involution commuting with the half-flux operator.

    Ku = exp(-i*psi) * conj(u) with the vertex phase psi integrating minus
    twice the link phases along a base spanning tree; exp(i*psi) is
    single-valued because doubled circulations are integers.  Fixed vectors
    of K are the representatives whose cover lift has constant phase.
    """

    def __init__(self, graph: EdgeGraph, tol: float = 1e-8):
        tree = spanning_tree(graph)
        eta = tree_potential(graph, tree)
        is_tree = tree[4]
        a, b = graph.edges[:, 0], graph.edges[:, 1]
        circ = (eta[a] + graph.theta - eta[b]) / TWO_PI
        circ[is_tree] = 0.0
        doubled = 2.0 * circ
        off = np.abs(doubled - np.round(doubled))
        if np.any(off > tol):
            worst = int(np.argmax(off))
            raise NonHalfIntegerFlux(
                f"cycle through edge {worst} has circulation {circ[worst]:.9f}"
            )
        self.graph = graph
        self.psi = -2.0 * eta

    def apply(self, u) -> np.ndarray:
        u = np.asarray(u, dtype=complex).reshape(-1)
        return np.exp(-1j * self.psi) * np.conj(u)

    __call__ = apply


def conjugation_operator(grid, field) -> ConjugationOperator:
    from .operators import as_edge_graph

    return ConjugationOperator(as_edge_graph(grid, field))


def real_representatives(vectors, kop: ConjugationOperator, keep_tol: float = 1e-6) -> np.ndarray:
    """Orthonormal K-fixed basis of the span of the given eigenvectors.

    For each input column v both v + Kv and i(v - Kv) are K-fixed; a real
    Gram-Schmidt over those candidates recovers one fixed vector per complex
    dimension.  Inner products between K-fixed vectors are real, so the
    returned columns are orthonormal in the full complex inner product too.
    """
    U = np.asarray(vectors, dtype=complex)
    if U.ndim == 1:
        U = U[:, None]
    m = U.shape[1]
    basis = []
    for j in range(m):
        v = U[:, j]
        nv = np.linalg.norm(v)
        if nv == 0:
            continue
        v = v / nv
        kv = kop.apply(v)
        for cand in (v + kv, 1j * (v - kv)):
            if len(basis) == m:
                break
            w = cand.copy()
            for _ in range(2):
                for q in basis:
                    w = w - q * np.real(np.vdot(q, w))
            nw = np.linalg.norm(w)
            if nw > keep_tol:
                basis.append(w / nw)
    if len(basis) < m:
        raise DegenerateProjection(
            f"found {len(basis)} conjugation-fixed directions for a {m}-dimensional span"
        )
    return np.column_stack(basis)


def real_representative(u, kop: ConjugationOperator) -> np.ndarray:
    """Single K-fixed representative of a one-dimensional eigenspace."""
    return real_representatives(u, kop)[:, 0]

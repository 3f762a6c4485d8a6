"""The differential graded Lie algebra of non-oriented graphs.

Insertion ``g1 o g2`` replaces a vertex of ``g2`` by all of ``g1`` and
re-attaches the loose edge ends to vertices of ``g1`` in every possible way;
new terms carry the edge order ``E(g1) ^ E(g2)``.  The bracket is the graded
commutator of insertion and ``d = [edge, .]``.
"""
from __future__ import annotations

import itertools
import logging
from importlib import resources
from dataclasses import dataclass
from fractions import Fraction

from .exactla import Echelon, RatMatrix, _integral, kernel_basis
from .graph_core import (
    GraphError,
    GraphSum,
    UndirectedGraph,
    canonical_form,
    enumerate_undirected,
    parse_graph_sums,
    sum_reduce,
)

log = logging.getLogger(__name__)

EDGE = UndirectedGraph(2, ((1, 2),))

__all__ = [
    "EDGE",
    "ComplexBasis",
    "insert_terms",
    "insert",
    "lie_bracket",
    "differential",
    "complex_basis",
    "differential_matrix",
    "cocycle_space",
    "is_exact",
    "coboundary_echelon",
    "cocycles_on_support",
    "cohomology_ratio",
    "heptagon_wheel_cocycle",
]


def insert_terms(g1: UndirectedGraph, g2: UndirectedGraph):
    """Yield the unreduced labelled terms of ``g1 o g2`` (each with coefficient 1)."""
    k1, k2 = g1.k, g2.k
    for v in range(1, k2 + 1):
        # g2 vertices before v keep labels, g1 takes v..v+k1-1, the rest shift
        def lab2(u, v=v):
            return u if u < v else u + k1 - 1

        inner = [(i + v - 1, j + v - 1) for i, j in g1.edges]
        touching = [idx for idx, e in enumerate(g2.edges) if v in e]
        for targets in itertools.product(range(v, v + k1), repeat=len(touching)):
            where = dict(zip(touching, targets))
            outer = []
            for idx, (a, b) in enumerate(g2.edges):
                if idx in where:
                    other = b if a == v else a
                    outer.append((lab2(other), where[idx]))
                else:
                    outer.append((lab2(a), lab2(b)))
            yield UndirectedGraph(k1 + k2 - 1, tuple(inner + outer))


def insert(g1: UndirectedGraph, g2: UndirectedGraph) -> GraphSum:
    return sum_reduce((t, 1) for t in insert_terms(g1, g2))


def _homogeneous_edges(s: GraphSum) -> int | None:
    counts = s.edge_counts()
    if len(counts) > 1:
        raise GraphError(f"bracket argument mixes edge counts {sorted(counts)}")
    return next(iter(counts)) if counts else None


def lie_bracket(a: GraphSum, b: GraphSum) -> GraphSum:
    """``[a, b] = a o b - (-1)^(#E(a) #E(b)) b o a``, extended bilinearly."""
    ea, eb = _homogeneous_edges(a), _homogeneous_edges(b)
    if ea is None or eb is None:
        return GraphSum()
    sign = -1 if (ea * eb) % 2 == 0 else 1
    pairs = []
    for g1, c1 in a:
        for g2, c2 in b:
            c = c1 * c2
            pairs.extend((t, c) for t in insert_terms(g1, g2))
            pairs.extend((t, sign * c) for t in insert_terms(g2, g1))
    return sum_reduce(pairs)


def differential(s: GraphSum) -> GraphSum:
    """``d(s) = [edge, s]``; computed per homogeneous edge-count component."""
    out = GraphSum()
    by_e: dict = {}
    for g, c in s:
        by_e.setdefault(g.e, {})[g] = c
    for terms in by_e.values():
        out = out + lie_bracket(GraphSum.of(EDGE), GraphSum(terms))
    return out


def _d_graph(g: UndirectedGraph) -> GraphSum:
    return lie_bracket(GraphSum.of(EDGE), GraphSum({g: Fraction(1)}))


@dataclass(frozen=True)
class ComplexBasis:
    k: int
    e: int
    basis: tuple

    def index(self) -> dict:
        return {g: i for i, g in enumerate(self.basis)}

    def vector_to_sum(self, vec) -> GraphSum:
        return GraphSum({g: Fraction(c) for g, c in zip(self.basis, vec) if c})


def complex_basis(k: int, e: int | None = None, min_degree: int = 2, connected: bool = True) -> ComplexBasis:
    """Nonzero canonical graphs on ``(k, e)``; ``e`` defaults to ``2k - 2``."""
    if e is None:
        e = 2 * k - 2
    graphs = enumerate_undirected(k, e, min_degree, connected)
    return ComplexBasis(k, e, tuple(sg.graph for sg in graphs if sg.sign))


def differential_matrix(basis: ComplexBasis):
    """Rows indexed by target graphs, columns by ``basis``; returns (matrix, target list)."""
    targets: dict = {}
    entries = {}
    for col, g in enumerate(basis.basis):
        for t, c in _d_graph(g):
            row = targets.setdefault(t, len(targets))
            entries[(row, col)] = c
    return RatMatrix(len(targets), len(basis.basis), entries), list(targets)


def coboundary_echelon(k: int, e: int | None = None) -> Echelon:
    """Echelon form of ``d`` applied to all connected graphs on ``(k-1, e-1)``.

    Rows live in graph coordinates, keyed by canonical ``UndirectedGraph``.
    """
    if e is None:
        e = 2 * k - 2
    ech = Echelon()
    ech.columns = {}
    if k < 2 or e < 1 or e - 1 > (k - 1) * (k - 2) // 2:
        return ech
    for g in complex_basis(k - 1, e - 1, min_degree=0).basis:
        ech.add_row(_graph_row(_d_graph(g), ech.columns))
    return ech


def _graph_row(s: GraphSum, columns: dict) -> dict:
    row = {}
    for g, c in s:
        col = columns.get(g)
        if col is None:
            col = columns[g] = len(columns)
        row[col] = c
    return row


def cocycle_space(k: int, min_degree: int = 3, exclude_exact: bool = True) -> list:
    """Cocycles on connected graphs with ``k`` vertices and ``2k-2`` edges.

    The ansatz keeps nonzero graphs of minimum vertex degree ``min_degree``;
    ``d`` is taken into the unrestricted target space.  With
    ``exclude_exact`` (the default) only kernel vectors independent modulo
    coboundaries are returned, i.e. representatives of nontrivial classes.
    """
    basis = complex_basis(k, min_degree=min_degree)
    log.info("cocycle search k=%d: %d basis graphs", k, len(basis.basis))
    M, _ = differential_matrix(basis)
    kernel = [basis.vector_to_sum(v) for v in kernel_basis(M)]
    if not exclude_exact or not kernel:
        return kernel
    ech = coboundary_echelon(k)
    reps = []
    for z in kernel:
        if ech.add_row(_graph_row(z, ech.columns)):
            reps.append(z)
    return reps


def cocycles_on_support(graphs) -> list:
    """Basis of the cocycles whose support lies in the given graphs."""
    basis = ComplexBasis(0, 0, tuple(dict.fromkeys(canonical_form(g).graph for g in graphs)))
    M, _ = differential_matrix(basis)
    return [basis.vector_to_sum(v) for v in kernel_basis(M)]


def cohomology_ratio(a: GraphSum, b: GraphSum):
    """Scalar ``c`` with ``a - c b`` a coboundary, or ``None`` if there is none.

    ``b`` must be a non-exact cocycle on the same ``(k, e)`` as ``a``.
    """
    (k,), (e,) = b.vertex_counts(), b.edge_counts()
    ech = coboundary_echelon(k, e)
    row_b = _graph_row(b, ech.columns)
    row_a = _graph_row(a, ech.columns)
    tag = len(ech.columns)  # after every graph column
    if not ech.reduce(_integral(row_b)):
        raise GraphError("cohomology_ratio: the reference cocycle is exact")
    row_b[tag] = 1
    ech.add_row(row_b)
    rref = ech.reduced()
    rest = {c: Fraction(v) for c, v in row_a.items()}
    for p in sorted(rref):
        v = rest.get(p)
        if p == tag or not v:
            continue
        for c, x in rref[p].items():
            nv = rest.get(c, 0) - v * x
            if nv:
                rest[c] = nv
            else:
                rest.pop(c, None)
    if any(c != tag for c in rest):
        return None
    # every vector of the row space carries the multiple of b in its tag slot
    return -rest.get(tag, Fraction(0))


def is_exact(s: GraphSum, use_fast_path: bool = True):
    """Decide whether the cocycle ``s`` is ``d`` of something on one vertex fewer.

    Returns ``(False, None)`` or ``(True, witness)`` with ``d(witness) == s``.
    The fast path answers False at once when some graph in the support has
    every edge on a triangle, since ``d`` never produces such graphs.
    """
    if not s:
        return True, GraphSum()
    ks, es = s.vertex_counts(), s.edge_counts()
    if len(ks) != 1 or len(es) != 1:
        raise GraphError("is_exact expects a homogeneous graph sum")
    if differential(s):
        raise GraphError("is_exact expects a cocycle (d(s) != 0)")
    if use_fast_path and any(g.has_triangle_cover() for g, _ in s):
        return False, None
    k, e = next(iter(ks)), next(iter(es))
    if k < 2 or e < 1 or e - 1 > (k - 1) * (k - 2) // 2:
        return False, None  # nothing to take d of
    source = complex_basis(k - 1, e - 1, min_degree=0, connected=True)
    M, targets = differential_matrix(source)
    # solve M x = s; columns of M plus the right-hand side
    row_of = {t: i for i, t in enumerate(targets)}
    rhs_col = len(source.basis)
    rows = M.row_dicts()
    for g, c in s:
        if g not in row_of:
            row_of[g] = len(rows)
            rows.append({})
        rows[row_of[g]][rhs_col] = c
    ech = Echelon()
    for row in rows:
        ech.add_row(row)
    rref = ech.reduced()
    if rhs_col in rref:
        return False, None
    x = {p: row.get(rhs_col, 0) for p, row in rref.items()}
    return True, source.vector_to_sum([x.get(i, 0) for i in range(len(source.basis))])


def heptagon_wheel_cocycle() -> GraphSum:
    """The tabulated 46-term cocycle on 8 vertices, heptagon wheel coefficient 1."""
    text = resources.files("kgflow").joinpath("data/heptagon_wheel_cocycle.txt").read_text()
    return parse_graph_sums(text)

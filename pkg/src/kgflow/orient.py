"""Orienting non-oriented graphs into bivector Kontsevich graphs.

Vertex ``i`` of a graph on ``k`` vertices becomes internal vertex ``i + 1``
(so ``2..k+1``) and two sinks ``0, 1`` are added.  A base pair ``a <= b``
receives the sink edges ``a -> 0`` and ``b -> 1``; the old edges are then
oriented so that every internal vertex issues exactly two arrows.  Forced
orientations are propagated to a fixpoint and the remaining freedom is
explored by branching.

At a vertex the outgoing old edges keep their relative order from the edge
list of the graph; a sink edge takes the slot left free after them, and a
vertex sending both arrows to sinks sends ``L`` to sink 0.

Each orientation carries the sign of the permutation taking the edge order
``a -> 0, b -> 1, e_1, .., e_m`` (old edges in the order of the graph) to the
order ``L_2, R_2, .., L_{k+1}, R_{k+1}`` of the Kontsevich graph.  This sign
depends only on the graph's edge order, not on how the orientation was
found, so the signed sum over orientations is well defined.
"""
from __future__ import annotations

import itertools
from fractions import Fraction

from .graph_core import GraphError, GraphSum, UndirectedGraph, permutation_sign
from .kgraph import KGraphSum, KontsevichGraph, SignedKontsevichGraph, alt, normal_form

__all__ = [
    "orientations",
    "orient",
    "orient_sum",
    "orient_bruteforce",
    "skew_span",
    "oriented_flow",
]


def _kontsevich(g: UndirectedGraph, a: int, b: int, heads: dict) -> SignedKontsevichGraph:
    """Assemble the signed (2, k) graph; ``heads[e]`` is the head of old edge ``e``."""
    out = {v: [] for v in range(1, g.k + 1)}
    for idx, (i, j) in enumerate(g.edges):
        h = heads[idx]
        tail = i if h == j else j
        out[tail].append((h + 1, idx + 2))
    out[a].append((0, 0))
    out[b].append((1, 1))
    pairs = tuple(tuple(t for t, _ in out[v]) for v in range(1, g.k + 1))
    labels = [lab for v in range(1, g.k + 1) for _, lab in out[v]]
    return SignedKontsevichGraph(KontsevichGraph(2, g.k, pairs), permutation_sign(labels))


def _distinct(signed) -> list:
    """Normal forms of signed graphs; a class met with both signs is zero."""
    seen: dict = {}
    for sg in signed:
        nf = normal_form(sg)
        seen.setdefault(nf.graph, set()).add(nf.sign)
    return [
        SignedKontsevichGraph(h, signs.pop() if len(signs) == 1 else 0)
        for h, signs in sorted(seen.items())
    ]


def _propagate(g, nbr_edges, heads, outdeg) -> bool:
    """Apply the forced rules until nothing changes; False on a contradiction."""
    changed = True
    while changed:
        changed = False
        for v in range(1, g.k + 1):
            free = [e for e in nbr_edges[v] if heads[e] is None]
            h = outdeg[v]
            if h > 2 or h + len(free) < 2:
                return False
            if h == 2 and free:
                for e in free:  # all remaining edges point at v
                    heads[e] = v
                    i, j = g.edges[e]
                    outdeg[i if j == v else j] += 1
                changed = True
            elif free and h + len(free) == 2:
                for e in free:  # every free edge must leave v
                    i, j = g.edges[e]
                    heads[e] = j if i == v else i
                outdeg[v] = 2
                changed = True
    return True


def orientations(g: UndirectedGraph):
    """Yield ``(a, b, SignedKontsevichGraph)`` for every admissible orientation."""
    if not g.is_connected():
        raise GraphError("orientation needs a connected graph")
    nbr_edges = {v: [] for v in range(1, g.k + 1)}
    for idx, (i, j) in enumerate(g.edges):
        nbr_edges[i].append(idx)
        nbr_edges[j].append(idx)

    def branch(heads, outdeg):
        if not _propagate(g, nbr_edges, heads, outdeg):
            return
        pending = [v for v in range(1, g.k + 1) if outdeg[v] < 2]
        if not pending:
            yield dict(heads)
            return
        # prefer a vertex already touched by an oriented edge
        touched = [
            v for v in pending
            if outdeg[v] or any(heads[e] is not None for e in nbr_edges[v])
        ]
        v = (touched or pending)[0]
        free = [e for e in nbr_edges[v] if heads[e] is None]
        for chosen in itertools.combinations(free, 2 - outdeg[v]):
            h2, d2 = dict(heads), dict(outdeg)
            for e in chosen:
                i, j = g.edges[e]
                h2[e] = j if i == v else i
            d2[v] = 2
            yield from branch(h2, d2)

    for a in range(1, g.k + 1):
        for b in range(a, g.k + 1):
            heads = {e: None for e in range(g.e)}
            outdeg = {v: 0 for v in range(1, g.k + 1)}
            outdeg[a] += 1
            outdeg[b] += 1
            for h in branch(heads, outdeg):
                yield a, b, _kontsevich(g, a, b, h)


def orient(g: UndirectedGraph) -> list:
    """Distinct normal forms of all orientations; zero graphs carry sign 0."""
    return _distinct(sg for _, _, sg in orientations(g))


def orient_sum(g: UndirectedGraph) -> KGraphSum:
    """Signed sum over every base pair and orientation."""
    return KGraphSum.from_terms((sg, 1) for _, _, sg in orientations(g))


def _brute_orientations(g: UndirectedGraph):
    for a in range(1, g.k + 1):
        for b in range(a, g.k + 1):
            for bits in itertools.product((0, 1), repeat=g.e):
                heads = {e: g.edges[e][bit] for e, bit in enumerate(bits)}
                outdeg = {v: 0 for v in range(1, g.k + 1)}
                outdeg[a] += 1
                outdeg[b] += 1
                for e, (i, j) in enumerate(g.edges):
                    outdeg[i if heads[e] == j else j] += 1
                if all(d == 2 for d in outdeg.values()):
                    yield _kontsevich(g, a, b, heads)


def orient_bruteforce(g: UndirectedGraph) -> list:
    """Same as :func:`orient` by trying all ``2^e`` directions (small graphs)."""
    return _distinct(_brute_orientations(g))


def skew_span(graphs) -> list:
    """Distinct nonzero skew sums ``alt(G)`` (up to scale), one per sink orbit."""
    out = {}
    for G in graphs:
        if isinstance(G, SignedKontsevichGraph):
            G = G.graph
        s = alt(KGraphSum.of(G))
        if not s:
            continue
        items = s.sorted_items()
        s = s * (1 / items[0][1])
        out.setdefault(tuple(s.sorted_items()), s)
    return [out[key] for key in sorted(out, key=lambda key: [g.flat for g, _ in key])]


def oriented_flow(gamma: GraphSum, method: str = "full", max_iter: int = 10):
    """A flow in the skew span of the orientations of ``gamma``.

    Every flow coefficient is an unknown and the factorization problem is
    solved jointly with the Leibniz coefficients.  Returns the normalized
    solution flows (one per dimension of the solution space; empty when
    there is none).
    """
    from .factor import solve_flow_ansatz

    if not gamma:
        return []
    graphs = []
    for g, _ in gamma:
        graphs.extend(orient(g))
    basis = skew_span(graphs)
    return solve_flow_ansatz(basis, method=method, max_iter=max_iter).flows()

"""Leibniz graphs: Kontsevich graphs with one Jacobiator vertex.

A Leibniz graph is stored without contracting anything: a Kontsevich graph
with a marked edge ``w -> v``.  The Jacobiator stands on the three targets
``a, b`` of ``v`` and ``c`` of ``w``; arrows into the Jacobiator all point at
``v`` and none at ``w``.  Expanding means summing the three cyclic ways of
placing ``(a, b, c)`` and letting every arrow into ``v`` also land on ``w``.
"""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction

from .graph_core import GraphError, permutation_sign
from .kgraph import (
    KGraphSum,
    KontsevichGraph,
    alt,
    decode,
    encode,
    normal_form,
    normal_form_labelled,
    relabel_sinks,
)

log = logging.getLogger(__name__)

__all__ = [
    "LeibnizGraph",
    "SymbolicSum",
    "LayerState",
    "contract",
    "expansion_terms",
    "expand",
    "expand_skew",
    "leibniz_normal_form",
    "skew_normal_form",
    "gen_leibniz",
    "kontsevich_graphs",
    "iterative_layers",
    "parse_leibniz",
    "format_leibniz",
]


@dataclass(frozen=True, order=True)
class LeibnizGraph:
    graph: KontsevichGraph
    w: int
    v: int

    def __post_init__(self):
        g = self.graph
        n = g.n
        if not (self.w >= n and self.v >= n and self.w != self.v):
            raise GraphError(f"marked edge {self.w}->{self.v} must join internal vertices")
        if self.v not in g.targets[self.w - n]:
            raise GraphError(f"no edge {self.w}->{self.v}")
        if any(t == self.w for t in g.flat):
            raise GraphError(f"vertex {self.w} of the marked edge has incoming arrows")
        if len(set(self.jac_targets())) != 3:
            raise GraphError(f"Jacobiator targets {self.jac_targets()} are not distinct")

    def jac_targets(self) -> tuple:
        """``(a, b, c)``: the targets of ``v`` in slot order, then the other target of ``w``."""
        g = self.graph
        a, b = g.targets[self.v - g.n]
        pw = g.targets[self.w - g.n]
        c = pw[1] if pw[0] == self.v else pw[0]
        return a, b, c

    def w_sign(self) -> int:
        """+1 when the marked edge is the L edge of ``w``."""
        return 1 if self.graph.targets[self.w - self.graph.n][0] == self.v else -1

    def jac_in_edges(self) -> list:
        """``(source, slot)`` of arrows into the Jacobiator, the marked edge excluded."""
        return [(u, s) for u, s, t in self.graph.edges() if t == self.v and u != self.w]

    def __str__(self):
        return format_leibniz(self)


def _with_pairs(g: KontsevichGraph, changes: dict) -> KontsevichGraph:
    pairs = list(g.targets)
    for u, pair in changes.items():
        pairs[u - g.n] = pair
    return KontsevichGraph(g.n, g.k, tuple(pairs))


def contract(g: KontsevichGraph, w: int, v: int) -> LeibnizGraph:
    """Leibniz graph obtained by viewing ``w -> v`` as the Jacobiator's inner edge.

    Arrows into ``w`` are redirected to ``v``.
    """
    n = g.n
    pairs = [tuple(v if t == w else t for t in pair) for pair in g.targets]
    return LeibnizGraph(KontsevichGraph(n, g.k, tuple(pairs)), w, v)


def _placed(L: LeibnizGraph, triple) -> KontsevichGraph:
    a, b, c = triple
    return _with_pairs(L.graph, {L.v: (a, b), L.w: (L.v, c)})


def expansion_terms(L: LeibnizGraph) -> list:
    """Unreduced ``(graph, sign)`` terms: 3 cyclic placements x 2^m Leibniz choices."""
    a, b, c = L.jac_targets()
    sw = L.w_sign()
    ins = L.jac_in_edges()
    out = []
    for triple in ((a, b, c), (b, c, a), (c, a, b)):
        base = _placed(L, triple)
        for choice in itertools.product((L.v, L.w), repeat=len(ins)):
            pairs = [list(p) for p in base.targets]
            for (u, slot), t in zip(ins, choice):
                pairs[u - base.n][slot] = t
            out.append((KontsevichGraph(base.n, base.k, tuple(map(tuple, pairs))), sw))
    return out


def expand(L: LeibnizGraph) -> KGraphSum:
    return KGraphSum.from_terms(expansion_terms(L))


def expand_skew(L: LeibnizGraph) -> KGraphSum:
    return alt(expand(L))


def _normal_form(L: LeibnizGraph, skew: bool):
    a, b, c = L.jac_targets()
    sw = L.w_sign()
    n = L.graph.n
    perms = list(itertools.permutations(range(n))) if skew else [tuple(range(n))]
    best = None
    signs: set = set()
    for triple in ((a, b, c), (b, c, a), (c, a, b)):
        placed = _placed(L, triple)
        zero = placed.has_double_edge()
        for perm in perms:
            g = relabel_sinks(placed, perm) if skew else placed
            nf, found = normal_form_labelled(g)
            ps = permutation_sign(perm)
            for lab, s in found:
                key = (nf.flat, lab[L.w], lab[L.v])
                sign = 0 if zero else sw * ps * s
                if best is None or key < best[0]:
                    best = (key, nf)
                    signs = set()
                if key == best[0]:
                    signs.add(sign)
    (_, w, v), nf = best
    sign = 0 if (0 in signs or len(signs) > 1) else signs.pop()
    return LeibnizGraph(nf, w, v), sign


def leibniz_normal_form(L: LeibnizGraph):
    """Minimal ``(graph, marked edge)`` over cyclic Jacobiator placements; returns (L, sign)."""
    return _normal_form(L, skew=False)


def skew_normal_form(L: LeibnizGraph, canonical: bool = False):
    """Normal form of the alternation of ``L``; returns (L, sign).

    Default: sink permutations are tried in lexicographic order and only the
    graph encodings of their Leibniz normal forms are compared; the first
    permutation reaching the minimal graph supplies the marked edge and the
    sign, so zero detection is that of the chosen Leibniz normal form.  Some
    alternations that cancel only across sink permutations are therefore
    kept (their skew expansion is empty).

    With ``canonical`` the marked edge takes part in the comparison and a
    class reachable with both signs is zero, so equal alternations always get
    equal normal forms.
    """
    if canonical:
        return _normal_form(L, skew=True)
    best = None
    for perm in itertools.permutations(range(L.graph.n)):
        nf, s = leibniz_normal_form(LeibnizGraph(relabel_sinks(L.graph, perm), L.w, L.v))
        if best is None or nf.graph.flat < best[0].graph.flat:
            best = (nf, s * permutation_sign(perm))
    return best


# -- symbolic sums ----------------------------------------------------------


class SymbolicSum:
    """Graph sum with affine coefficients ``{unknown or None: Fraction}``."""

    def __init__(self):
        self.terms: dict = {}

    @classmethod
    def constant(cls, s: KGraphSum) -> "SymbolicSum":
        out = cls()
        out.add(s, None)
        return out

    def add(self, s: KGraphSum, unknown, factor=1):
        for g, c in s:
            row = self.terms.setdefault(g, {})
            v = row.get(unknown, 0) + factor * c
            if v:
                row[unknown] = v
            else:
                row.pop(unknown, None)
                if not row:
                    del self.terms[g]

    def __len__(self):
        return len(self.terms)

    def unknowns(self) -> set:
        return {u for row in self.terms.values() for u in row if u is not None}


# -- generation ---------------------------------------------------------------


def kontsevich_graphs(n: int, k: int, sink_cap=None) -> list:
    """Normal-form classes of (n, k) graphs without double edges.

    ``sink_cap`` bounds the in-degree of every sink.  Zero graphs are kept,
    since extending them can break the symmetry that kills them.
    """
    total = n + k
    choices = [
        [p for p in itertools.combinations(range(total), 2) if n + a not in p]
        for a in range(k)
    ]
    seen = set()
    out = []
    deg = [0] * n

    def rec(a, pairs):
        if a == k:
            g = KontsevichGraph(n, k, tuple(pairs))
            nf = normal_form(g).graph
            if nf not in seen:
                seen.add(nf)
                out.append(nf)
            return
        for p in choices[a]:
            if sink_cap is not None and any(t < n and deg[t] >= sink_cap for t in p):
                continue
            for t in p:
                if t < n:
                    deg[t] += 1
            pairs.append(p)
            rec(a + 1, pairs)
            pairs.pop()
            for t in p:
                if t < n:
                    deg[t] -= 1

    rec(0, [])
    return sorted(out, key=lambda g: g.flat)


def gen_leibniz(k: int, n: int, multivector_only: bool = True, skew: bool = True) -> list:
    """Leibniz graphs whose expansion has ``k`` internal vertices and ``n`` sinks.

    Seeds are Kontsevich graphs on ``k - 1`` internal vertices; each internal
    vertex ``x`` in turn becomes the Jacobiator, which keeps the targets of
    ``x`` and gets a third target.  For multivectors every sink must end up
    with exactly one arrow, so a sink is allowed as third target only if the
    seed leaves it untouched.  Output is one representative per (skew)
    normal form, zero graphs dropped, sorted.
    """
    if k < 2:
        return []
    m = k - 1
    seeds = kontsevich_graphs(n, m, sink_cap=1 if multivector_only else None)
    found = {}
    for g in seeds:
        deg = g.in_degrees()
        empty = [s for s in range(n) if deg[s] == 0]
        if multivector_only and len(empty) > 1:
            continue
        w = n + m  # the new vertex carrying the marked edge
        for x in g.internal():
            i, j = g.targets[x - n]
            if multivector_only and empty:
                thirds = empty
            else:
                thirds = [t for t in range(n + m) if t not in (x, i, j)]
                if multivector_only:
                    thirds = [t for t in thirds if t >= n]
            for t in thirds:
                pairs = list(g.targets) + [(x, t)]
                L = LeibnizGraph(KontsevichGraph(n, m + 1, tuple(pairs)), w, x)
                nf, sign = skew_normal_form(L) if skew else leibniz_normal_form(L)
                if sign:
                    found.setdefault(nf, sign)
    return sorted(found)


# -- iterative layers -------------------------------------------------------


@dataclass
class LayerState:
    table: list = field(default_factory=list)  # skew normal forms, index = unknown
    counts: list = field(default_factory=list)  # cumulative table size per iteration
    total: SymbolicSum = field(default_factory=SymbolicSum)
    stable: bool = False

    @property
    def iteration(self) -> int:
        return len(self.counts)


def _discover(g: KontsevichGraph):
    """Yield Leibniz graphs obtained by marking an admissible edge ``w -> v``."""
    n = g.n
    for v in g.internal():
        hv = g.heads(v)
        for w in sorted(g.tails(v)):
            if w in hv:  # v -> w would make an eye with the marked edge
                continue
            if hv & (g.heads(w) - {v}):
                continue
            if g.targets[w - n][0] == g.targets[w - n][1]:
                continue
            yield contract(g, w, v)


def iterative_layers(S0: KGraphSum, max_iter: int = 10, keep_zero: bool = False) -> LayerState:
    """Grow the table of skew Leibniz graphs that can reproduce ``S0``.

    Iteration ``i`` marks edges in every graph of ``S_{i-1}`` (``S_0`` at
    first, later the expansions of the graphs added in the previous round),
    adds new skew normal forms with fresh unknowns and subtracts their
    skew expansions from the running total.
    """
    state = LayerState(total=SymbolicSum.constant(S0))
    known: dict = {}
    frontier = sorted(g for g, _ in S0)
    for it in range(1, max_iter + 1):
        new = {}
        for g in frontier:
            for L in _discover(g):
                nf, sign = skew_normal_form(L)
                if not sign and not keep_zero:
                    continue
                if nf not in known and nf not in new:
                    new[nf] = sign
        support = set()
        for nf in sorted(new):
            idx = len(state.table)
            known[nf] = idx
            state.table.append(nf)
            e = expand_skew(nf)
            state.total.add(e, idx, -1)
            support.update(g for g, _ in e)
        state.counts.append(len(state.table))
        log.info("iteration %d: %d skew Leibniz graphs (+%d)", it, len(state.table), len(new))
        if not new:
            state.stable = True
            break
        frontier = sorted(support)
    return state


# -- text format --------------------------------------------------------------


def format_leibniz(L: LeibnizGraph, coeff=None) -> str:
    tail = f"  {coeff}" if coeff is not None else ""
    return f"{encode(L.graph)}  @ {L.w} {L.v}{tail}"


def parse_leibniz(text: str) -> list:
    """Lines ``<kgraph>  @ w v  [coeff]``; returns ``(LeibnizGraph, Fraction)`` pairs."""
    out = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "@" not in line:
            raise GraphError(f"missing '@ w v' in {raw!r}")
        head, tail = line.split("@", 1)
        sg = decode(head)
        parts = tail.split()
        if len(parts) not in (2, 3):
            raise GraphError(f"bad marked edge in {raw!r}")
        coeff = Fraction(parts[2]) if len(parts) == 3 else Fraction(1)
        out.append((LeibnizGraph(sg.graph, int(parts[0]), int(parts[1])), coeff * sg.sign))
    return out

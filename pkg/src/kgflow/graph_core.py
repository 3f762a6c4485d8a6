"""Non-oriented graphs with wedge-ordered edges.

A graph on ``k`` vertices (labelled ``1..k``) stores its edges as an ordered
tuple; the order is the wedge ordering ``e1 ^ e2 ^ ... ^ em`` so swapping two
edges flips the sign of the graph.  Canonical forms are computed by
individualization-refinement: the search tree is built over an
isomorphism-invariant ordered partition of the vertices and the leaf with the
lexicographically smallest sorted edge list wins.  A graph with an
automorphism that permutes its edges oddly is a zero graph.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator

__all__ = [
    "GraphError",
    "UndirectedGraph",
    "SignedUndirectedGraph",
    "GraphSum",
    "canonical_form",
    "sum_reduce",
    "enumerate_undirected",
    "permutation_sign",
    "parse_graph_terms",
    "parse_graph_sums",
    "format_graph_sum",
    "wheel",
]


class GraphError(ValueError):
    """Raised for malformed graph input."""


def permutation_sign(seq) -> int:
    """Sign of the permutation that sorts ``seq`` (entries must be distinct)."""
    order = sorted(range(len(seq)), key=seq.__getitem__)
    seen = [False] * len(order)
    sign = 1
    for start in range(len(order)):
        if seen[start]:
            continue
        j = start
        length = 0
        while not seen[j]:
            seen[j] = True
            j = order[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


@dataclass(frozen=True)
class UndirectedGraph:
    """Simple graph on vertices ``1..k``; ``edges`` is the wedge-ordered edge list."""

    k: int
    edges: tuple

    def __post_init__(self):
        if self.k < 1:
            raise GraphError(f"vertex count must be positive, got {self.k}")
        norm = []
        for e in self.edges:
            i, j = e
            if i == j:
                raise GraphError(f"tadpole at vertex {i}")
            if not (1 <= i <= self.k and 1 <= j <= self.k):
                raise GraphError(f"edge {i}{j} out of range 1..{self.k}")
            norm.append((i, j) if i < j else (j, i))
        if len(set(norm)) != len(norm):
            raise GraphError("multiple edges are not allowed")
        object.__setattr__(self, "edges", tuple(norm))

    @property
    def e(self) -> int:
        return len(self.edges)

    def degrees(self) -> list:
        deg = [0] * (self.k + 1)
        for i, j in self.edges:
            deg[i] += 1
            deg[j] += 1
        return deg[1:]

    def neighbours(self) -> list:
        nb = [set() for _ in range(self.k + 1)]
        for i, j in self.edges:
            nb[i].add(j)
            nb[j].add(i)
        return nb

    def is_connected(self) -> bool:
        nb = self.neighbours()
        seen = {1}
        stack = [1]
        while stack:
            v = stack.pop()
            for u in nb[v]:
                if u not in seen:
                    seen.add(u)
                    stack.append(u)
        return len(seen) == self.k

    def has_triangle_cover(self) -> bool:
        """True when every edge lies on a triangle (wheels are built this way)."""
        nb = self.neighbours()
        return all(nb[i] & nb[j] for i, j in self.edges)

    def relabel(self, perm) -> "UndirectedGraph":
        """Apply ``perm`` (a mapping old label -> new label, 1-based) keeping edge order."""
        return UndirectedGraph(self.k, tuple((perm[i], perm[j]) for i, j in self.edges))

    def encode(self) -> str:
        return " ".join(f"{i}{j}" for i, j in self.edges)

    def __str__(self):
        return f"{self.k} {self.e}  {self.encode()}"


@dataclass(frozen=True)
class SignedUndirectedGraph:
    graph: UndirectedGraph
    sign: int

    @property
    def is_zero(self) -> bool:
        return self.sign == 0


# ---------------------------------------------------------------------------
# canonical labelling

def _refine(cells, adj):
    while True:
        masks = []
        for cell in cells:
            m = 0
            for v in cell:
                m |= 1 << v
            masks.append(m)
        new = []
        changed = False
        for cell in cells:
            if len(cell) == 1:
                new.append(cell)
                continue
            sigs = {v: tuple((adj[v] & m).bit_count() for m in masks) for v in cell}
            keys = sorted(set(sigs.values()))
            if len(keys) == 1:
                new.append(cell)
                continue
            changed = True
            for key in keys:
                new.append(tuple(v for v in cell if sigs[v] == key))
        cells = new
        if not changed:
            return cells


def _leaves(cells, adj):
    cells = _refine(cells, adj)
    for idx, cell in enumerate(cells):
        if len(cell) > 1:
            break
    else:
        yield [c[0] for c in cells]
        return
    for v in cell:
        rest = tuple(u for u in cell if u != v)
        yield from _leaves(cells[:idx] + [(v,), rest] + cells[idx + 1:], adj)


_CANON_CACHE: dict = {}


def _canon_data(k: int, edge_set: tuple):
    """Return (canonical sorted edges, one minimizing labelling, zero flag).

    ``edge_set`` holds sorted 0-based pairs; the labelling maps old 0-based
    vertex -> new 0-based vertex.
    """
    key = (k, edge_set)
    hit = _CANON_CACHE.get(key)
    if hit is not None:
        return hit
    adj = [0] * k
    for i, j in edge_set:
        adj[i] |= 1 << j
        adj[j] |= 1 << i
    deg = [a.bit_count() for a in adj]
    init = [tuple(v for v in range(k) if deg[v] == d) for d in sorted(set(deg))]
    best = None
    best_lab = None
    best_parity = None
    zero = False
    for order in _leaves(init, adj):
        lab = [0] * k
        for pos, v in enumerate(order):
            lab[v] = pos
        mapped = [(lab[i], lab[j]) if lab[i] < lab[j] else (lab[j], lab[i]) for i, j in edge_set]
        cert = tuple(sorted(mapped))
        if best is None or cert < best:
            best, best_lab = cert, lab
            best_parity = permutation_sign(mapped)
            zero = False
        elif cert == best and not zero:
            if permutation_sign(mapped) != best_parity:
                zero = True
    result = (best, tuple(best_lab), zero)
    _CANON_CACHE[key] = result
    return result


def canonical_form(g: UndirectedGraph) -> SignedUndirectedGraph:
    """Canonical relabelling of ``g`` with the sign of the induced edge permutation.

    The sign is 0 when ``g`` has an automorphism acting oddly on its edges.
    """
    edges0 = [(i - 1, j - 1) for i, j in g.edges]
    canon, lab, zero = _canon_data(g.k, tuple(sorted(edges0)))
    graph = UndirectedGraph(g.k, tuple((i + 1, j + 1) for i, j in canon))
    if zero:
        return SignedUndirectedGraph(graph, 0)
    mapped = [(lab[i], lab[j]) if lab[i] < lab[j] else (lab[j], lab[i]) for i, j in edges0]
    return SignedUndirectedGraph(graph, permutation_sign(mapped))


# ---------------------------------------------------------------------------
# linear combinations

class GraphSum:
    """Formal rational combination of canonical non-oriented graphs."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {} if terms is None else terms

    @classmethod
    def from_terms(cls, pairs: Iterable) -> "GraphSum":
        return sum_reduce(pairs)

    @classmethod
    def of(cls, g: UndirectedGraph, coeff=1) -> "GraphSum":
        return sum_reduce([(g, coeff)])

    def __iter__(self) -> Iterator:
        return iter(self.terms.items())

    def __len__(self):
        return len(self.terms)

    def __bool__(self):
        return bool(self.terms)

    def __getitem__(self, g: UndirectedGraph):
        sg = canonical_form(g)
        return sg.sign * self.terms.get(sg.graph, Fraction(0))

    def __eq__(self, other):
        if not isinstance(other, GraphSum):
            return NotImplemented
        return self.terms == other.terms

    def __add__(self, other: "GraphSum") -> "GraphSum":
        out = dict(self.terms)
        for g, c in other.terms.items():
            v = out.get(g, 0) + c
            if v:
                out[g] = v
            else:
                out.pop(g, None)
        return GraphSum(out)

    def __neg__(self):
        return GraphSum({g: -c for g, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, scalar):
        scalar = Fraction(scalar)
        if not scalar:
            return GraphSum()
        return GraphSum({g: c * scalar for g, c in self.terms.items()})

    __rmul__ = __mul__

    def edge_counts(self) -> set:
        return {g.e for g in self.terms}

    def vertex_counts(self) -> set:
        return {g.k for g in self.terms}

    def sorted_items(self):
        return sorted(self.terms.items(), key=lambda kv: (kv[0].k, kv[0].edges))

    def normalized(self, g: UndirectedGraph) -> "GraphSum":
        """Rescale so that the coefficient of ``g`` (in its given edge order) is 1."""
        c = self[g]
        if not c:
            raise GraphError(f"graph {g} is not in the support")
        return self * (1 / c)

    def __repr__(self):
        return f"GraphSum({len(self.terms)} terms)"


def sum_reduce(pairs: Iterable) -> GraphSum:
    """Canonicalize every term, fold signs into coefficients and drop zeros.

    ``pairs`` yields ``(graph, coeff)`` where graph is an ``UndirectedGraph`` or
    a ``SignedUndirectedGraph``.
    """
    out: dict = {}
    for g, c in pairs:
        if not c:
            continue
        s = 1
        if isinstance(g, SignedUndirectedGraph):
            s, g = g.sign, g.graph
            if not s:
                continue
        sg = canonical_form(g)
        if not sg.sign:
            continue
        key = sg.graph
        out[key] = out.get(key, 0) + Fraction(c) * s * sg.sign
    return GraphSum({g: c for g, c in out.items() if c})


# ---------------------------------------------------------------------------
# enumeration

def _components(k, edges):
    parent = list(range(k))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i, j in edges:
        a, b = find(i), find(j)
        if a != b:
            parent[a] = b
    return len({find(v) for v in range(k)})


def enumerate_undirected(k: int, e: int, min_degree: int = 0, connected: bool = False) -> list:
    """One canonical representative per isomorphism class of simple graphs.

    Returns ``SignedUndirectedGraph`` items whose sign is 1, or 0 for zero
    graphs, sorted by edge list.
    """
    if k < 1 or e < 0 or e > k * (k - 1) // 2:
        raise GraphError(f"no simple graphs with k={k}, e={e}")
    if min_degree * k > 2 * e or min_degree > k - 1:
        return []
    if connected and e < k - 1:
        return []
    all_pairs = list(itertools.combinations(range(k), 2))
    level = {()}
    for j in range(e):
        remaining = e - j - 1
        nxt = set()
        for es in level:
            present = set(es)
            for p in all_pairs:
                if p in present:
                    continue
                cand = tuple(sorted(es + (p,)))
                deg = [0] * k
                for a, b in cand:
                    deg[a] += 1
                    deg[b] += 1
                deficit = sum(max(0, min_degree - d) for d in deg)
                if deficit > 2 * remaining:
                    continue
                if connected and _components(k, cand) - 1 > remaining:
                    continue
                nxt.add(_canon_data(k, cand)[0])
        level = nxt
    out = []
    for es in sorted(level):
        g = UndirectedGraph(k, tuple((i + 1, j + 1) for i, j in es))
        if connected and not g.is_connected():
            continue
        if min(g.degrees()) < min_degree:
            continue
        sg = canonical_form(g)
        out.append(SignedUndirectedGraph(sg.graph, 1 if sg.sign else 0))
    return out


def wheel(spokes: int) -> UndirectedGraph:
    """Wheel with rim ``1..spokes`` and axis vertex ``spokes+1``."""
    n = spokes
    rim = [(i, i % n + 1) for i in range(1, n + 1)]
    return UndirectedGraph(n + 1, tuple(rim + [(i, n + 1) for i in range(1, n + 1)]))


# ---------------------------------------------------------------------------
# text codec: ``k e  v1v2 v1v2 ...  coeff`` per line

def _parse_coeff(tok: str) -> Fraction:
    try:
        return Fraction(tok)
    except (ValueError, ZeroDivisionError) as exc:
        raise GraphError(f"bad coefficient {tok!r}") from exc


def parse_graph_terms(text: str) -> list:
    """Parse the line format into raw ``(UndirectedGraph, Fraction)`` pairs."""
    terms = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        if len(toks) < 2:
            raise GraphError(f"line {lineno}: expected 'k e edges... coeff'")
        try:
            k, e = int(toks[0]), int(toks[1])
        except ValueError as exc:
            raise GraphError(f"line {lineno}: bad header {toks[:2]}") from exc
        body = toks[2:]
        if len(body) == e + 1:
            edge_toks, coeff = body[:e], _parse_coeff(body[e])
        elif len(body) == e:
            edge_toks, coeff = body, Fraction(1)
        else:
            raise GraphError(f"line {lineno}: expected {e} edge tokens, got {len(body)}")
        edges = []
        for tok in edge_toks:
            if len(tok) != 2 or not tok.isdigit():
                raise GraphError(f"line {lineno}: bad edge token {tok!r}")
            edges.append((int(tok[0]), int(tok[1])))
        try:
            terms.append((UndirectedGraph(k, tuple(edges)), coeff))
        except GraphError as exc:
            raise GraphError(f"line {lineno}: {exc}") from exc
    return terms


def parse_graph_sums(text: str) -> GraphSum:
    return sum_reduce(parse_graph_terms(text))


def format_graph_sum(s: GraphSum) -> str:
    lines = []
    for g, c in s.sorted_items():
        if g.k > 9:
            raise GraphError("text format supports at most 9 vertices")
        lines.append(f"{g.k} {g.e}  {g.encode()}  {c}")
    return "\n".join(lines) + ("\n" if lines else "")

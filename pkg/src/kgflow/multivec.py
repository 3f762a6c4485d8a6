"""Multivectors encoded by Kontsevich graphs.

A multivector graph has exactly one arrow into each sink.  The bivector P is
the wedge ``2 1 1  0 1``; the Jacobiator is the tri-vector ``[[P, P]] / 2``.
The Schouten bracket inserts one multivector into a sink of the other and
lets the arrow that used to hit the sink act on the inserted graph by the
Leibniz rule.
"""
from __future__ import annotations

import itertools
import math
from fractions import Fraction

from .graph_core import GraphError
from .kgraph import WEDGE, KGraphSum, KontsevichGraph, alt, normal_form

__all__ = [
    "P_SUM",
    "jacobiator",
    "is_multivector_sum",
    "arity",
    "insert_into_sink",
    "schouten_bracket",
    "gen_one_vectors",
    "gen_bi_vectors",
    "gen_tri_vectors",
]

P_SUM = KGraphSum.of(WEDGE)

_JAC_TERMS = (
    (((0, 1), (3, 2)), 1),
    (((0, 2), (3, 1)), -1),
    (((1, 2), (0, 3)), -1),
)


def jacobiator() -> KGraphSum:
    """Totally skew sum of the three graphs of the Jacobi identity."""
    return KGraphSum.from_terms((KontsevichGraph(3, 2, t), c) for t, c in _JAC_TERMS)


def arity(s: KGraphSum) -> int:
    ns = {g.n for g in s.terms}
    if len(ns) != 1:
        raise GraphError(f"expected one sink count, got {sorted(ns)}")
    return ns.pop()


def is_multivector_sum(s: KGraphSum) -> bool:
    return all(g.is_multivector() for g in s.terms)


def insert_into_sink(a: KontsevichGraph, b: KontsevichGraph) -> list:
    """Labelled terms of ``b`` inserted into sink 0 of ``a``.

    New sinks: those of ``a`` (minus sink 0) followed by those of ``b``; new
    internal vertices: those of ``a`` followed by those of ``b``.  The arrow
    into sink 0 lands on each internal vertex of ``b`` in turn.
    """
    p, q = a.n, b.n
    n = p + q - 1
    ka, kb = a.k, b.k

    def map_a(t, hit):
        if t == 0:
            return hit
        return t - 1 if t < p else n + (t - p)

    def map_b(t):
        return p - 1 + t if t < q else n + ka + (t - q)

    tail_b = [tuple(map_b(t) for t in pair) for pair in b.targets]
    out = []
    for beta in range(kb):
        hit = n + ka + beta
        head = [tuple(map_a(t, hit) for t in pair) for pair in a.targets]
        out.append(KontsevichGraph(n, ka + kb, tuple(head + tail_b)))
    return out


def _check_multivector(s: KGraphSum):
    if not is_multivector_sum(s):
        raise GraphError("bracket argument has a sink with in-degree other than 1")


def _insert_sum(a: KGraphSum, b: KGraphSum) -> list:
    pairs = []
    for ga, ca in a:
        for gb, cb in b:
            pairs.extend((t, ca * cb) for t in insert_into_sink(ga, gb))
    return pairs


def _pre_bracket(a: KGraphSum, b: KGraphSum, p: int, q: int) -> KGraphSum:
    """``(-1)^p alt(a < b) / ((p-1)! q!)``: ``b`` fed into every sink of ``a``."""
    c = Fraction((-1) ** p, math.factorial(p - 1) * math.factorial(q))
    return alt(KGraphSum.from_terms(_insert_sum(a, b))) * c


def schouten_bracket(a: KGraphSum, b: KGraphSum) -> KGraphSum:
    """Graded bracket of two skew multivector sums of arities ``p`` and ``q``.

    ``[[A, B]] = A o B - (-1)^((p-1)(q-1)) B o A`` with
    ``A o B = (-1)^p alt(A < B) / ((p-1)! q!)``, where ``A < B`` inserts ``B``
    into the first sink of ``A``.  The sign makes ``[[P, P]]`` twice the
    Jacobiator.
    """
    if not a or not b:
        return KGraphSum()
    _check_multivector(a)
    _check_multivector(b)
    p, q = arity(a), arity(b)
    eps = -1 if (p - 1) * (q - 1) % 2 else 1
    return _pre_bracket(a, b, p, q) - _pre_bracket(b, a, q, p) * eps


# -- generators -----------------------------------------------------------------


def _seeds(n: int, k: int) -> list:
    from .leibniz import kontsevich_graphs

    return kontsevich_graphs(n, k) if k >= 0 else []


def _skew_key(s: KGraphSum):
    items = s.sorted_items()
    lead = items[0][1]
    return tuple((g, c / lead) for g, c in items)


def _collect(graphs, skew: bool, allow_eyes: bool) -> list:
    """Normalize, drop zeros (and eyes if asked), deduplicate up to scalars."""
    out = {}
    for g in graphs:
        if g.has_double_edge() or (not allow_eyes and g.has_eye()):
            continue
        s = alt(KGraphSum.of(g)) if skew else KGraphSum.of(g)
        if not s:
            continue
        items = s.sorted_items()
        s = s * (1 / items[0][1])
        out.setdefault(_skew_key(s), s)
    return [out[key] for key in sorted(out, key=lambda key: [g.flat for g, _ in key])]


def _grow(seed: KontsevichGraph, n_new: int, old_sink_pairs) -> KontsevichGraph:
    """Turn the sinks of ``seed`` into internal vertices and add ``n_new`` sinks.

    ``old_sink_pairs[s]`` gives the new target pair of old sink ``s`` in the
    new labelling, where old internal vertex ``u`` is ``u - seed.n + n_new``
    and old sink ``s`` is ``n_new + seed.k + s``.
    """
    n0, k0 = seed.n, seed.k
    relabel = {u: u - n0 + n_new for u in seed.internal()}
    relabel.update({s: n_new + k0 + s for s in range(n0)})
    pairs = [tuple(relabel[t] for t in p) for p in seed.targets]
    pairs += [tuple(p) for p in old_sink_pairs]
    return KontsevichGraph(n_new, k0 + n0, tuple(pairs))


def gen_one_vectors(k: int, allow_eyes: bool = True) -> list:
    """1-vector graphs on ``k`` internal vertices, one normalized sum per class."""
    if k < 1:
        return []
    out = []
    for seed in _seeds(1, k - 1):
        old = 1 + (k - 1)  # label of the old sink
        for x in range(1, 1 + k):
            if x != old:
                out.append(_grow(seed, 1, [(0, x)]))
    return _collect(out, skew=False, allow_eyes=allow_eyes)


def gen_bi_vectors(k: int, allow_eyes: bool = True) -> list:
    """Skew bivector graph sums on ``k`` internal vertices (both variants)."""
    if k < 1:
        return []
    out = [_grow(seed, 2, [(0, 1)]) for seed in _seeds(1, k - 1)]
    if k >= 2:
        for seed in _seeds(2, k - 2):
            a, b = 2 + k - 2, 2 + k - 1  # old sinks
            inner = range(2, 2 + k)
            for x in inner:
                for y in inner:
                    if x != a and y != b:
                        out.append(_grow(seed, 2, [(0, x), (1, y)]))
    return _collect(out, skew=True, allow_eyes=allow_eyes)


def gen_tri_vectors(k: int, allow_eyes: bool = True) -> list:
    """Skew tri-vector graph sums on ``k`` internal vertices (both variants)."""
    if k < 2:
        return []
    out = []
    inner = range(3, 3 + k)
    for seed in _seeds(2, k - 2):
        b = 3 + k - 1
        for x in inner:
            if x != b:
                out.append(_grow(seed, 3, [(0, 1), (2, x)]))
    if k >= 3:
        for seed in _seeds(3, k - 3):
            olds = [3 + k - 3 + s for s in range(3)]
            for xs in itertools.product(inner, repeat=3):
                if all(x != o for x, o in zip(xs, olds)):
                    out.append(_grow(seed, 3, [(s, x) for s, x in enumerate(xs)]))
    return _collect(out, skew=True, allow_eyes=allow_eyes)

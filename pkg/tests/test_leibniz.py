import itertools
import random

import pytest

from kgflow.graph_core import GraphError, permutation_sign
from kgflow.kgraph import KGraphSum, KontsevichGraph, alt, relabel_sinks
from kgflow.leibniz import (
    LeibnizGraph,
    expand,
    expand_skew,
    expansion_terms,
    format_leibniz,
    gen_leibniz,
    iterative_layers,
    leibniz_normal_form,
    parse_leibniz,
    skew_normal_form,
)
from kgflow.multivec import jacobiator

JAC = LeibnizGraph(KontsevichGraph(3, 2, ((0, 1), (3, 2))), 4, 3)


def relabel_internal(L: LeibnizGraph, perm) -> LeibnizGraph:
    """Rename internal vertex ``n + i`` to ``n + perm[i]``."""
    g, n = L.graph, L.graph.n
    lab = list(range(n)) + [n + p for p in perm]
    pairs = [None] * g.k
    for a, (x, y) in enumerate(g.targets):
        pairs[perm[a]] = (lab[x], lab[y])
    return LeibnizGraph(KontsevichGraph(n, g.k, tuple(pairs)), lab[L.w], lab[L.v])


def brute_leibniz(k: int, n: int) -> set:
    """Skew normal forms of all multivector Leibniz graphs on ``n`` sinks, ``k`` vertices."""
    total = n + k
    found = set()
    options = [
        [p for p in itertools.permutations(range(total), 2) if n + a not in p]
        for a in range(k)
    ]
    for pairs in itertools.product(*options):
        g = KontsevichGraph(n, k, pairs)
        if sorted(t for t in g.flat if t < n) != list(range(n)):
            continue
        for w in range(n, total):
            for v in pairs[w - n]:
                if v < n:
                    continue
                try:
                    L = LeibnizGraph(g, w, v)
                except GraphError:
                    continue
                nf, sign = skew_normal_form(L)
                if sign:
                    found.add(nf)
    return found


def random_leibniz(rng, k=3, n=3):
    while True:
        pairs = []
        for a in range(k):
            pairs.append(tuple(rng.sample([t for t in range(n + k) if t != n + a], 2)))
        g = KontsevichGraph(n, k, tuple(pairs))
        cand = [(w, v) for w in g.internal() for v in g.targets[w - n] if v >= n]
        rng.shuffle(cand)
        for w, v in cand:
            try:
                return LeibnizGraph(g, w, v)
            except GraphError:
                pass


def test_bare_jacobiator_expands_to_jacobiator():
    assert expand(JAC) == jacobiator()
    assert expand_skew(JAC) == alt(jacobiator())
    assert len(expansion_terms(JAC)) == 3


def test_bare_jacobiator_is_fixed_by_normal_form():
    nf, sign = skew_normal_form(JAC)
    assert sign != 0
    assert expand_skew(nf) * sign == expand_skew(JAC)
    assert skew_normal_form(nf) == (nf, 1)


def test_rejects_bad_marked_edges():
    g = KontsevichGraph(3, 2, ((0, 1), (3, 2)))
    with pytest.raises(GraphError):
        LeibnizGraph(g, 3, 4)  # no edge 3 -> 4
    with pytest.raises(GraphError):
        LeibnizGraph(KontsevichGraph(3, 2, ((4, 1), (3, 2))), 4, 3)  # arrow into w
    with pytest.raises(GraphError):
        LeibnizGraph(KontsevichGraph(3, 2, ((0, 1), (3, 1))), 4, 3)  # repeated target


@pytest.mark.parametrize("seed", range(20))
def test_expansion_term_count(seed):
    L = random_leibniz(random.Random(seed))
    assert len(expansion_terms(L)) == 3 * 2 ** len(L.jac_in_edges())


@pytest.mark.parametrize("seed", range(20))
def test_normal_form_invariant_under_relabelling(seed):
    rng = random.Random(seed)
    L = random_leibniz(rng)
    perm = list(range(L.graph.k))
    rng.shuffle(perm)
    M = relabel_internal(L, perm)
    a, sa = leibniz_normal_form(L)
    b, sb = leibniz_normal_form(M)
    assert a == b and sa == sb
    # expansion is unchanged by the relabelling and represented by the normal form
    assert expand(M) == expand(L)
    assert expand(a) * sa == expand(L)


@pytest.mark.parametrize("seed", range(10))
def test_skew_normal_form_under_sink_permutations(seed):
    rng = random.Random(seed)
    L = random_leibniz(rng)
    for perm in itertools.permutations(range(3)):
        M = LeibnizGraph(relabel_sinks(L.graph, perm), L.w, L.v)
        a, sa = skew_normal_form(M, canonical=True)
        b, sb = skew_normal_form(L, canonical=True)
        assert a == b and sa == sb * permutation_sign(perm)
        # the literal mode agrees on the graph, not necessarily on the marked edge
        assert skew_normal_form(M)[0].graph == skew_normal_form(L)[0].graph
        for canonical in (False, True):
            nf, s = skew_normal_form(M, canonical=canonical)
            assert expand_skew(nf) * s == expand_skew(M)


def test_gen_leibniz_smallest():
    (L,) = gen_leibniz(2, 3)
    assert expand_skew(L) in (alt(jacobiator()), -alt(jacobiator()))
    assert gen_leibniz(1, 3) == []


def test_gen_leibniz_matches_brute_force():
    assert set(gen_leibniz(3, 3)) == brute_leibniz(3, 3)


def test_gen_leibniz_bivectors():
    out = gen_leibniz(3, 2)
    assert out == sorted(set(out))
    for L in out:
        assert sorted(t for t in L.graph.flat if t < 2) == [0, 1]


def test_iterative_layers_on_jacobiator():
    state = iterative_layers(alt(jacobiator()))
    assert state.counts[0] == 1
    assert state.stable
    # every graph of the Jacobiator is matched by the single unknown
    assert {frozenset(r) for r in state.total.terms.values()} == {frozenset((None, 0))}


def test_iterative_layers_stop_on_empty():
    state = iterative_layers(KGraphSum())
    assert state.counts == [0] and state.stable


def test_text_round_trip():
    rng = random.Random(3)
    for _ in range(10):
        L = random_leibniz(rng)
        ((back, c),) = parse_leibniz(format_leibniz(L, 3))
        assert back == L and c == 3
    with pytest.raises(GraphError):
        parse_leibniz("3 2 1  0 1 3 2")
    with pytest.raises(GraphError):
        parse_leibniz("3 2 1  0 1 3 2  @ 4")

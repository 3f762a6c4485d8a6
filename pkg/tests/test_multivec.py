import itertools
import random
from fractions import Fraction

import pytest

from kgflow.graph_core import GraphError
from kgflow.kgraph import KGraphSum, KontsevichGraph, alt, decode, normal_form, parse_kgraph_sum
from kgflow.multivec import (
    P_SUM,
    arity,
    gen_bi_vectors,
    gen_one_vectors,
    gen_tri_vectors,
    insert_into_sink,
    jacobiator,
    schouten_bracket,
)
from kgflow.multivec import _collect
from kgflow.poisson_eval import graph_components, random_bivector, schouten_analytic

from conftest import Q_TEXT


def brute_multivectors(n, k, skew):
    """All (n, k) multivector graphs by exhaustive target lists."""
    choices = [
        [p for p in itertools.product(range(n + k), repeat=2) if n + a not in p]
        for a in range(k)
    ]
    graphs = []
    for pairs in itertools.product(*choices):
        g = KontsevichGraph(n, k, pairs)
        if g.is_multivector():
            graphs.append(g)
    return _collect(graphs, skew, True)


def as_set(sums):
    return sorted(str(s) for s in sums)


def test_jacobiator_terms():
    J = jacobiator()
    assert len(J) == 3
    assert J[decode("3 2 1  0 1 3 2").graph] == 1
    assert alt(J) == J * 6


def test_bracket_of_P_with_itself():
    assert schouten_bracket(P_SUM, P_SUM) == jacobiator() * 2


def test_tetrahedral_bracket_counts(q_flow):
    S = schouten_bracket(P_SUM, q_flow)
    assert len(S) == 39
    orbits = {
        min(normal_form(KontsevichGraph(3, g.k, tuple(tuple(p[t] if t < 3 else t for t in pair) for pair in g.targets))).graph.flat
            for p in itertools.permutations(range(3)))
        for g, _ in S
    }
    assert len(orbits) == 9


def test_bracket_with_zero_is_empty():
    X = gen_one_vectors(3)[0]
    assert not schouten_bracket(P_SUM, X * 0)
    assert not schouten_bracket(KGraphSum(), P_SUM)


def test_bracket_rejects_non_multivectors():
    bad = KGraphSum.of(KontsevichGraph(2, 2, ((0, 3), (0, 1))))
    with pytest.raises(GraphError):
        schouten_bracket(P_SUM, bad)


def test_insertion_term_count():
    a = decode("2 1 1  0 1").graph
    b = decode("2 2 1  0 3 1 2").graph
    assert len(insert_into_sink(a, b)) == b.k


def random_multivector(rng, n):
    k = {1: 3, 2: rng.choice([1, 3]), 3: 2}[n]
    pool = {1: gen_one_vectors, 2: gen_bi_vectors, 3: gen_tri_vectors}[n](k)
    out = KGraphSum()
    for s in pool:
        out = out + s * Fraction(rng.randint(-3, 3))
    return out or pool[0]


@pytest.mark.parametrize("seed", range(6))
def test_bracket_matches_analytic_oracle(seed):
    rng = random.Random(seed)
    p, q = rng.choice([(2, 2), (2, 1), (1, 2), (3, 1), (2, 3), (1, 1)])
    A, B = random_multivector(rng, p), random_multivector(rng, q)
    P = random_bivector(3, 2, rng)
    lhs = graph_components(schouten_bracket(A, B), P, p + q - 1) if p + q - 1 <= 3 else {}
    rhs = schouten_analytic(graph_components(A, P, p), p, graph_components(B, P, q), q, 3)
    assert lhs == rhs


@pytest.mark.parametrize("seed", range(4))
def test_graded_antisymmetry(seed):
    rng = random.Random(100 + seed)
    for p, q in [(2, 1), (2, 2), (3, 1), (2, 3)]:
        A, B = random_multivector(rng, p), random_multivector(rng, q)
        sign = -((-1) ** ((p - 1) * (q - 1)))  # [[A,B]] = -(-1)^((p-1)(q-1)) [[B,A]]
        assert schouten_bracket(A, B) == schouten_bracket(B, A) * sign


def test_graded_jacobi_with_P():
    # [[P, [[P, X]]]] is the bracket of X with the Jacobiator, exactly on graphs
    for X in gen_one_vectors(3) + gen_bi_vectors(3)[:2]:
        lhs = schouten_bracket(P_SUM, schouten_bracket(P_SUM, X))
        rhs = schouten_bracket(jacobiator(), X)
        assert lhs == rhs * -1 or lhs == rhs


def test_generators_small_cases():
    assert gen_one_vectors(1) == []
    assert gen_bi_vectors(1) == [P_SUM]
    assert gen_tri_vectors(1) == []
    (J,) = gen_tri_vectors(2)
    assert J == jacobiator() or J == jacobiator() * -1
    (X,) = gen_one_vectors(3)
    assert str(X).startswith("1 3 1")


def test_bivectors_at_k4_contain_tetrahedral_graphs():
    Q = parse_kgraph_sum(Q_TEXT)
    support = {g for s in gen_bi_vectors(4) for g, _ in s}
    assert {g for g, _ in Q} <= support


@pytest.mark.parametrize(
    "n,k,gen",
    [(1, 2, gen_one_vectors), (1, 3, gen_one_vectors), (2, 2, gen_bi_vectors), (2, 3, gen_bi_vectors),
     (3, 2, gen_tri_vectors), (3, 3, gen_tri_vectors)],
)
def test_generators_match_brute_force(n, k, gen):
    assert as_set(gen(k)) == as_set(brute_multivectors(n, k, n > 1))


def test_generator_output_invariants():
    for s in gen_bi_vectors(4) + gen_tri_vectors(3):
        n = arity(s)
        assert all(g.is_multivector() and normal_form(g).graph == g for g, _ in s)
        assert alt(s) == s * (2 if n == 2 else 6)


def test_no_eyes_flag():
    assert all(not g.has_eye() for s in gen_bi_vectors(4, allow_eyes=False) for g, _ in s)
    assert len(gen_bi_vectors(4, allow_eyes=False)) < len(gen_bi_vectors(4))

"""End-to-end acceptance checks, one test per criterion.

A PASS/FAIL line per criterion is printed in the terminal summary (see
``conftest.py``).  Criterion 9 takes hours and only runs with
``KGFLOW_LONG=1``.
"""
import itertools
import os
import random
import time
from fractions import Fraction

import pytest

from kgflow.factor import classify_flows, solve_factorization
from kgflow.graph_complex import (
    cocycle_space,
    cohomology_ratio,
    complex_basis,
    differential,
    heptagon_wheel_cocycle,
    is_exact,
)
from kgflow.graph_core import (
    GraphSum,
    canonical_form,
    enumerate_undirected,
    parse_graph_sums,
    wheel,
)
from kgflow.kgraph import KGraphSum, alt, decode, normal_form, parse_kgraph_sum, relabel_sinks
from kgflow.leibniz import expand_skew, gen_leibniz, iterative_layers
from kgflow.multivec import P_SUM, jacobiator, schouten_bracket
from kgflow.orient import orient, orient_bruteforce, orient_sum, skew_span
from kgflow.poisson_eval import (
    PolyBivector,
    eval_analytic,
    eval_sum,
    jacobi_check,
    monomials,
    random_bivector,
    schouten_analytic,
    sl2_bivector,
)

from conftest import GAMMA5_TEXT, Q_TEXT, k4, tetra_flow

LONG = os.environ.get("KGFLOW_LONG") == "1"
HEPTAGON = "8 14  16 17 18 23 25 28 34 38 46 48 57 58 68 78  1"


def _gamma(text):
    return parse_graph_sums(text)


def test_criterion_1_zero_graphs():
    start = time.perf_counter()
    assert normal_form(decode("2 3 1 0 1 0 1 2 3")).sign == 0
    assert canonical_form(wheel(4)).sign == 0
    assert time.perf_counter() - start < 1


def test_criterion_2_cocycles_and_d_squared():
    start = time.perf_counter()
    assert not differential(GraphSum.of(k4()))
    assert not differential(_gamma(GAMMA5_TEXT))
    checked = 0
    for k in range(1, 7):
        for e in range(0, k * (k - 1) // 2 + 1):
            for g in complex_basis(k, e, min_degree=0).basis:
                assert not differential(differential(GraphSum.of(g)))
                checked += 1
    assert checked == 54  # nonzero connected graphs on at most six vertices
    assert time.perf_counter() - start < 60


def test_criterion_3_cocycle_spaces():
    assert cocycle_space(5) == []
    assert cocycle_space(7) == []
    (z6,) = cocycle_space(6)
    assert sorted(c for _, c in z6.normalized(wheel(5))) == [1, Fraction(5, 2)]
    ansatz = enumerate_undirected(6, 10, min_degree=2, connected=True)
    assert len(ansatz) == 12 and sum(1 for sg in ansatz if sg.sign == 0) == 6

    table = heptagon_wheel_cocycle()
    (hept,) = parse_graph_sums(HEPTAGON)
    assert hept == canonical_form(wheel(7)).graph
    assert len(table) == 46 and table[hept] == 1
    assert Fraction(-21, 8) in table.terms.values()
    assert Fraction(-119, 16) in table.terms.values()
    assert Fraction(49, 16) in table.terms.values()

    (z8,) = cocycle_space(8)
    z8 = z8.normalized(hept)
    assert cohomology_ratio(z8, table) == 1
    # the computed representative must coincide with the table term by term
    assert z8 == table


def test_criterion_4_nontriviality():
    for z in (GraphSum.of(k4()), _gamma(GAMMA5_TEXT), heptagon_wheel_cocycle()):
        assert is_exact(z, use_fast_path=True) == (False, None)
        assert is_exact(z, use_fast_path=False) == (False, None)


def test_criterion_5_flow_classification():
    start = time.perf_counter()
    c1 = classify_flows(1)
    assert c1.representatives == [P_SUM]
    for k in (2, 3):
        assert classify_flows(k).solutions == []
    c4 = classify_flows(4)
    assert len(c4.trivial) == 1
    assert len(c4.improper) == 3
    assert c4.intersection_dim == 0
    (rep,) = c4.representatives
    q = tetra_flow()
    assert rep == q * (1 / q.sorted_items()[0][1])
    coeffs = {}
    for h, c in parse_kgraph_sum(Q_TEXT):
        nf = normal_form(h)
        coeffs[nf.graph] = c * nf.sign
    assert sorted(coeffs.values()) == [-3, -3, 1]
    ref = min(coeffs)
    assert all(rep[g] * coeffs[ref] == c * rep[ref] for g, c in coeffs.items())
    for r in c4.representatives + c1.representatives:
        assert not any(g.has_eye() for g, _ in r)
    assert time.perf_counter() - start < 600


def test_criterion_6_tetrahedral_factorization():
    q = tetra_flow()
    lhs = schouten_bracket(P_SUM, q)
    assert len(lhs) == 39
    orbits = {
        min(normal_form(relabel_sinks(g, p)).graph for p in itertools.permutations(range(3)))
        for g, _ in lhs
    }
    assert len(orbits) == 9
    state = iterative_layers(lhs, max_iter=2)
    assert state.counts == [11, 61]
    res = solve_factorization(q)
    assert res.consistent and len(res.diamond) == 8
    assert not res.residual(lhs)


def test_criterion_7_orientation():
    gamma5 = _gamma(GAMMA5_TEXT)
    graphs = [sg for g, _ in gamma5 for sg in orient(g)]
    nfs3 = {sg.graph for sg in orient(k4())}
    for h, _ in parse_kgraph_sum(Q_TEXT):
        assert normal_form(h).graph in nfs3
    for k in range(2, 5):
        for e in range(1, k * (k - 1) // 2 + 1):
            for sg in enumerate_undirected(k, e, connected=True):
                assert orient(sg.graph) == orient_bruteforce(sg.graph)
    assert len(skew_span(graphs)) == 90


def test_criterion_8_oracle_identities():
    q = tetra_flow()
    res = solve_factorization(q)
    lhs = schouten_bracket(P_SUM, q)
    rhs = KGraphSum()
    for L, c in res.diamond:
        rhs = rhs + expand_skew(L) * c
    J = jacobiator()
    PP = schouten_bracket(P_SUM, P_SUM)
    for seed in range(20):
        rng = random.Random(seed)
        dim = 2 + seed % 2
        P = random_bivector(dim, 2, rng, density=0.7)
        PPa = schouten_analytic(P.comps, 2, P.comps, 2, dim)
        triples = list(itertools.combinations(monomials(dim, 3), 3))
        for args in rng.sample(triples, 8):
            j = eval_sum(J, P, list(args))
            assert eval_analytic(PPa, args, dim) == 2 * j
            assert eval_sum(PP, P, list(args)) == 2 * j
        if dim == 3 and seed < 6:
            R = P.ring
            args = [R.gens[0], R.gens[1] * R.gens[2], R.gens[2] ** 2]
            assert eval_sum(lhs, P, args) == eval_sum(rhs, P, args)
    assert jacobi_check(sl2_bivector())
    assert jacobi_check(PolyBivector(3, {(0, 1): 3, (0, 2): Fraction(1, 2), (1, 2): -1}))
    assert jacobi_check(PolyBivector(2, {(0, 1): 1}))


@pytest.mark.slow
@pytest.mark.skipif(not LONG, reason="hours; set KGFLOW_LONG=1")
def test_criterion_9_pentagon_wheel_layers():
    S = KGraphSum()
    for g, c in _gamma(GAMMA5_TEXT):
        S = S + orient_sum(g) * c
    lhs = schouten_bracket(P_SUM, alt(S))
    state = iterative_layers(lhs, max_iter=8)
    assert state.counts == [1518, 14846, 41031, 54188, 56318, 56503, 56509, 56509]
    # six vertices, one of them the Jacobiator: seven once expanded
    assert len(gen_leibniz(7, 3)) >= 265495

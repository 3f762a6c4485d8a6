"""Classify flows on four vertices and certify the tetrahedral one.

The bracket of the wedge with the flow is written as a combination of
skew Leibniz graphs, and the identity is checked numerically on a random
bivector that does not satisfy the Jacobi identity.
"""
import random

from kgflow.factor import classify_flows, solve_factorization
from kgflow.kgraph import KGraphSum
from kgflow.leibniz import expand_skew, format_leibniz
from kgflow.multivec import P_SUM, schouten_bracket
from kgflow.poisson_eval import eval_sum, jacobi_check, random_bivector


def main():
    c = classify_flows(4)
    print(c.summary())
    (Q,) = c.representatives
    res = solve_factorization(Q)
    print(f"layer counts {res.counts}, {len(res.diamond)} Leibniz graphs used:")
    for L, coeff in res.diamond:
        print(" ", format_leibniz(L, coeff))

    lhs = schouten_bracket(P_SUM, Q)
    rhs = KGraphSum()
    for L, coeff in res.diamond:
        rhs = rhs + expand_skew(L) * coeff
    P = random_bivector(3, 2, random.Random(1), density=0.5)
    R = P.ring
    args = [R.gens[0], R.gens[1] ** 2, R.gens[1] * R.gens[2]]
    print("random bivector is Poisson:", jacobi_check(P, max_degree=2))
    print("both sides agree on it:", eval_sum(lhs, P, args) == eval_sum(rhs, P, args))


if __name__ == "__main__":
    main()

"""The factorization problem [[P, Q(P)]] = <>(P, Jac(P)) and the flow classification.

A flow Q is a skew bivector graph sum.  It preserves the space of Poisson
structures if ``[[P, Q]]`` is a sum of skew Leibniz graphs, i.e. vanishes
whenever the Jacobi identity holds.  Flows ``[[P, X]]`` (trivial) and flows
that are themselves Leibniz bivectors (improper) always do; the interesting
ones are the rest.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction

from .exactla import Echelon, RatMatrix, kernel_basis, solve_affine
from .graph_core import GraphError
from .kgraph import KGraphSum
from .leibniz import SymbolicSum, expand_skew, gen_leibniz, iterative_layers
from .multivec import P_SUM, arity, gen_bi_vectors, gen_one_vectors, schouten_bracket

log = logging.getLogger(__name__)

__all__ = [
    "FactorizationProblem",
    "FactorizationResult",
    "FlowClassification",
    "build_problem",
    "solve_factorization",
    "sparse_solution",
    "bivector_coordinates",
    "FlowAnsatzSolution",
    "solve_flow_ansatz",
    "classify_flows",
]


@dataclass
class FactorizationProblem:
    """``lhs`` minus the expansions of ``table`` (unknown ``j`` for ``table[j]``)."""

    total: SymbolicSum
    table: list
    unknowns: list  # table indices that actually occur, in column order

    def system(self):
        col = {u: i for i, u in enumerate(self.unknowns)}
        rows, rhs = [], []
        for g in sorted(self.total.terms):
            row = self.total.terms[g]
            rows.append({col[u]: v for u, v in row.items() if u is not None})
            rhs.append(-row.get(None, Fraction(0)))
        return RatMatrix.from_rows(rows, len(col)), rhs


@dataclass
class FactorizationResult:
    problem: FactorizationProblem
    consistent: bool
    diamond: list = field(default_factory=list)  # (LeibnizGraph, coeff), nonzero only
    kernel_dim: int = 0
    counts: list = field(default_factory=list)  # cumulative layer sizes, iterative only

    def residual(self, lhs: KGraphSum) -> KGraphSum:
        """``lhs`` minus the expansion of the found diamond; empty when sound."""
        out = lhs
        for L, c in self.diamond:
            out = out - expand_skew(L) * c
        return out


def build_problem(Q: KGraphSum, method: str = "iterative", max_iter: int = 10) -> tuple:
    """Return ``(problem, [[P, Q]], layer counts)``."""
    if arity(Q) != 2:
        raise GraphError("the flow must be a bivector sum")
    lhs = schouten_bracket(P_SUM, Q)
    counts: list = []
    if method == "iterative":
        state = iterative_layers(lhs, max_iter=max_iter)
        total, table, counts = state.total, state.table, state.counts
    elif method == "full":
        (k,) = {g.k for g, _ in Q}
        table = gen_leibniz(k + 1, 3)
        total = SymbolicSum.constant(lhs)
        for j, L in enumerate(table):
            total.add(expand_skew(L), j, -1)
    else:
        raise GraphError(f"unknown method {method!r}")
    return FactorizationProblem(total, list(table), sorted(total.unknowns())), lhs, counts


def solve_factorization(Q: KGraphSum, method: str = "iterative", max_iter: int = 10) -> FactorizationResult:
    """Solve for skew Leibniz coefficients; the particular solution is the RREF one.

    Reduced row echelon form sets every free unknown to zero, which for the
    systems met here gives a sparse diamond.
    """
    problem, _, counts = build_problem(Q, method, max_iter)
    M, b = problem.system()
    sol = solve_affine(M, b)
    if sol is None:
        return FactorizationResult(problem, False, counts=counts)
    diamond = [
        (problem.table[u], x) for u, x in zip(problem.unknowns, sol.particular) if x
    ]
    return FactorizationResult(problem, True, diamond, len(sol.kernel), counts)


def sparse_solution(result: FactorizationResult, rounds: int = 1) -> FactorizationResult:
    """Try to shrink the diamond by forcing single coefficients to zero.

    Each round walks the current support and drops an unknown whenever the
    system stays consistent with it (and all earlier drops) fixed at zero,
    keeping the result only if it is sparser.
    """
    if not result.consistent:
        return result
    problem = result.problem
    M, b = problem.system()
    rows = M.row_dicts()
    col = {problem.table[u]: i for i, u in enumerate(problem.unknowns)}
    best = result
    for _ in range(rounds):
        support = [col[L] for L, _ in best.diamond]
        zero = [i for i in range(M.cols) if i not in set(support)]
        for i in support:
            extra = [{j: 1} for j in zero + [i]]
            sol = solve_affine(RatMatrix.from_rows(rows + extra, M.cols), b + [0] * len(extra))
            if sol is not None:
                zero.append(i)
        extra = [{j: 1} for j in zero]
        sol = solve_affine(RatMatrix.from_rows(rows + extra, M.cols), b + [0] * len(extra))
        diamond = [(problem.table[u], x) for u, x in zip(problem.unknowns, sol.particular) if x]
        if len(diamond) >= len(best.diamond):
            break
        best = FactorizationResult(problem, True, diamond, best.kernel_dim, best.counts)
    return best


# -- classification -----------------------------------------------------------


def bivector_coordinates(S: KGraphSum, basis: list) -> list:
    """Coordinates of a skew sum in a basis of normalized skew sums.

    Basis elements have disjoint supports and leading coefficient 1, so the
    coordinate is the coefficient of the leading graph.
    """
    coords = [S[b.sorted_items()[0][0]] for b in basis]
    back = KGraphSum()
    for b, c in zip(basis, coords):
        back = back + b * c
    if back != S:
        raise GraphError("sum is not in the span of the basis")
    return coords


def _row_space(vectors) -> dict:
    ech = Echelon()
    for v in vectors:
        ech.add_row({i: x for i, x in enumerate(v) if x})
    return ech.reduced()


def _reduce(v: dict, rref: dict) -> dict:
    v = dict(v)
    for p in sorted(rref):
        c = v.get(p)
        if c:
            for j, x in rref[p].items():
                y = v.get(j, 0) - c * x
                if y:
                    v[j] = y
                else:
                    v.pop(j, None)
    return v


@dataclass
class FlowClassification:
    k: int
    basis: list  # candidate bivector sums, column order
    solutions: list  # row-reduced coordinate vectors spanning all flows
    trivial: list
    improper: list
    intersection_dim: int
    representatives: list  # KGraphSum, one per quotient dimension

    @property
    def quotient_dim(self) -> int:
        return len(self.representatives)

    def summary(self) -> str:
        if not self.solutions:
            return f"k={self.k}: no solutions"
        lines = [
            f"k={self.k}: solutions {len(self.solutions)}, trivial {len(self.trivial)}, "
            f"improper {len(self.improper)}, intersection {self.intersection_dim}, "
            f"nontrivial proper {self.quotient_dim}"
        ]
        for r in self.representatives:
            lines.append(str(r).rstrip())
        return "\n".join(lines)


def _span_dim(vectors) -> int:
    return len(_row_space(vectors))


@dataclass
class FlowAnsatzSolution:
    basis: list  # candidate bivector sums, column order
    table: list  # skew Leibniz graphs
    solutions: list  # row-reduced coordinate vectors spanning all flows

    def flows(self) -> list:
        return [_to_sum({i: x for i, x in enumerate(v) if x}, self.basis) for v in self.solutions]


def _leibniz_table(basis: list, method: str, max_iter: int) -> list:
    if method == "full":
        ks = {g.k for B in basis for g, _ in B}
        return sorted({L for k in ks for L in gen_leibniz(k + 1, 3)})
    if method == "iterative":
        support = {g for B in basis for g, _ in schouten_bracket(P_SUM, B)}
        return iterative_layers(KGraphSum({g: 1 for g in support}), max_iter=max_iter).table
    raise GraphError(f"unknown method {method!r}")


def solve_flow_ansatz(basis: list, method: str = "full", max_iter: int = 10) -> FlowAnsatzSolution:
    """Flows ``sum c_i basis[i]`` whose bracket with P factors through the Jacobiator.

    The flow and Leibniz coefficients are solved for jointly; only the
    projection of the solution space onto the flow coefficients is kept.
    """
    nb = len(basis)
    table = _leibniz_table(basis, method, max_iter) if basis else []
    log.info("%d bivectors, %d skew Leibniz tri-vectors", nb, len(table))
    total = SymbolicSum()
    for i, B in enumerate(basis):
        total.add(schouten_bracket(P_SUM, B), i)
    for j, L in enumerate(table):
        total.add(expand_skew(L), nb + j, -1)
    M = RatMatrix.from_rows([dict(row) for row in total.terms.values()], nb + len(table))
    flows = [v[:nb] for v in kernel_basis(M)]
    return FlowAnsatzSolution(basis, table, _basis_rows(flows, nb))


def classify_flows(k: int, allow_eyes: bool = True) -> FlowClassification:
    """All flows on ``k`` internal vertices modulo trivial and improper ones."""
    basis = gen_bi_vectors(k, allow_eyes=allow_eyes)
    nb = len(basis)
    solutions = solve_flow_ansatz(basis, "full").solutions

    trivial = []
    for X in gen_one_vectors(k - 1):
        s = schouten_bracket(P_SUM, X)
        if s:
            trivial.append(bivector_coordinates(s, basis))
    improper = []
    for L in gen_leibniz(k, 2):
        s = expand_skew(L)
        if s:
            improper.append(bivector_coordinates(s, basis))
    trivial = _basis_rows(trivial, nb)
    improper = _basis_rows(improper, nb)
    inter = len(trivial) + len(improper) - _span_dim(trivial + improper)

    # quotient: pivot preferentially on graphs with eyes so representatives avoid them
    order = sorted(range(nb), key=lambda i: (not _has_eye(basis[i]), i))
    pos = {i: r for r, i in enumerate(order)}

    def permuted(v):
        return {pos[i]: x for i, x in enumerate(v) if x}

    sub = _row_space_dicts([permuted(v) for v in trivial + improper])
    rest = _row_space_dicts([_reduce(permuted(v), sub) for v in solutions])
    reps = []
    for p in sorted(rest):
        r = _reduce(rest[p], sub)
        reps.append(_to_sum({order[c]: x for c, x in r.items()}, basis))
    return FlowClassification(k, basis, solutions, trivial, improper, inter, reps)


def _row_space_dicts(rows) -> dict:
    ech = Echelon()
    for r in rows:
        ech.add_row(dict(r))
    return ech.reduced()


def _basis_rows(vectors, n) -> list:
    rref = _row_space(vectors)
    return [[rref[p].get(i, Fraction(0)) for i in range(n)] for p in sorted(rref)]


def _has_eye(s: KGraphSum) -> bool:
    return any(g.has_eye() for g, _ in s)


def _to_sum(vec: dict, basis: list) -> KGraphSum:
    out = KGraphSum()
    for i, x in sorted(vec.items()):
        out = out + basis[i] * x
    items = out.sorted_items()
    return out * (1 / items[0][1]) if items else out

"""Evaluate Kontsevich graph sums as polydifferential operators.

Every internal vertex carries a copy ``P^{ij}`` of a polynomial bivector,
every sink an argument; an edge issued from a vertex with index pair
``(i, j)`` acts as ``d/dx^i`` (slot L) or ``d/dx^j`` (slot R) on its target.
Polynomials are sympy sparse ring elements over QQ.
"""
from __future__ import annotations

import itertools
import random
import re
import string
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from sympy import QQ
from sympy.polys.rings import PolyRing

from .graph_core import GraphError
from .kgraph import KGraphSum, KontsevichGraph, SignedKontsevichGraph

__all__ = [
    "poly_ring",
    "PolyBivector",
    "eval_graph",
    "eval_sum",
    "jacobi_check",
    "bracket",
    "monomials",
    "random_bivector",
    "sl2_bivector",
    "parse_poly",
    "parse_bivector",
    "schouten_analytic",
    "bivector_components",
    "graph_components",
    "eval_analytic",
]

_RINGS: dict = {}


def poly_ring(dim: int) -> PolyRing:
    """The ring QQ[x1..xD]; cached so equal dimensions share one ring."""
    if dim not in _RINGS:
        _RINGS[dim] = PolyRing([f"x{i}" for i in range(1, dim + 1)], QQ)
    return _RINGS[dim]


@dataclass
class PolyBivector:
    """Antisymmetric matrix of polynomials; ``comps[(i, j)]`` for ``i < j`` (0-based)."""

    dim: int
    comps: dict

    def __post_init__(self):
        R = poly_ring(self.dim)
        comps = {}
        for (i, j), p in self.comps.items():
            if not (0 <= i < self.dim and 0 <= j < self.dim) or i == j:
                raise GraphError(f"bad bivector index ({i},{j}) for dim {self.dim}")
            p = R(p)
            if i > j:
                i, j, p = j, i, -p
            comps[(i, j)] = comps.get((i, j), R.zero) + p
        self.comps = {ij: p for ij, p in comps.items() if p}

    @property
    def ring(self):
        return poly_ring(self.dim)

    def entry(self, i: int, j: int):
        if i < j:
            return self.comps.get((i, j), self.ring.zero)
        if i > j:
            return -self.comps.get((j, i), self.ring.zero)
        return self.ring.zero


def _diff(p, idx):
    for i in idx:
        if not p:
            break
        p = p.diff(p.ring.gens[i])
    return p


def _eval_graph_loops(sg, P: PolyBivector, args):
    """Reference evaluation by explicit summation over all index assignments."""
    if isinstance(sg, KontsevichGraph):
        sg = SignedKontsevichGraph(sg, 1)
    g = sg.graph
    R = P.ring
    if len(args) != g.n:
        raise GraphError(f"graph has {g.n} sinks but {len(args)} arguments were given")
    args = [R(a) for a in args]
    if sg.sign == 0:
        return R.zero
    n, k, D = g.n, g.k, P.dim
    # incoming edges per vertex as (source, slot)
    incoming = [[] for _ in range(n + k)]
    for u, slot, t in g.edges():
        incoming[t].append((u, slot))
    # a vertex's factor is known once its own pair and all its sources are fixed
    ready_at = [[] for _ in range(k + 1)]
    for v in range(n + k):
        need = [u - n for u, _ in incoming[v]] + ([v - n] if v >= n else [])
        ready_at[max(need) + 1 if need else 0].append(v)
    pairs = [(i, j) for i in range(D) for j in range(D) if i != j]
    idx = [None] * k
    cache: dict = {}

    def factor(v):
        ds = tuple(sorted(idx[u - n][slot] for u, slot in incoming[v]))
        if v < n:
            key = (v, ds)
            if key not in cache:
                cache[key] = _diff(args[v], ds)
            return cache[key]
        i, j = idx[v - n]
        key = (i, j, ds)
        if key not in cache:
            cache[key] = _diff(P.entry(i, j), ds)
        return cache[key]

    total = R.zero

    def run(a, acc):
        nonlocal total
        for v in ready_at[a]:
            f = factor(v)
            if not f:
                return
            acc = acc * f
        if a == k:
            total += acc
            return
        for ij in pairs:
            idx[a] = ij
            run(a + 1, acc)
        idx[a] = None

    run(0, R.one)
    return total * sg.sign


def _content_tensor(base, in_count: int, D: int, lead: int, cache: dict):
    """Object array ``T[i, j, d1, .., dm] = d_{d1}..d_{dm} base(i, j)`` (``lead`` = 0 drops i, j)."""
    T = np.empty((D,) * (lead + in_count), dtype=object)
    for idx in itertools.product(range(D), repeat=lead + in_count):
        key = (idx[:lead], tuple(sorted(idx[lead:])))
        if key not in cache:
            cache[key] = _diff(base(*key[0]), key[1])
        T[idx] = cache[key]
    return T


def eval_graph(sg, P: PolyBivector, args):
    """Value of one (signed) graph on the argument polynomials.

    Each vertex becomes a tensor of differentiated contents and the graph is
    contracted with ``numpy.einsum`` on object arrays of exact polynomials.
    """
    if isinstance(sg, KontsevichGraph):
        sg = SignedKontsevichGraph(sg, 1)
    g = sg.graph
    R = P.ring
    if len(args) != g.n:
        raise GraphError(f"graph has {g.n} sinks but {len(args)} arguments were given")
    args = [R(a) for a in args]
    if sg.sign == 0:
        return R.zero
    n, k, D = g.n, g.k, P.dim
    letters = string.ascii_letters
    incoming = [[] for _ in range(n + k)]
    for u, slot, t in g.edges():
        incoming[t].append(letters[2 * (u - n) + slot])
    operands, subs = [], []
    pcache: dict = {}
    for v in range(n + k):
        if v < n:
            f = args[v]
            operands.append(_content_tensor(lambda f=f: f, len(incoming[v]), D, 0, {}))
            subs.append("".join(incoming[v]))
        else:
            a = v - n
            operands.append(_content_tensor(P.entry, len(incoming[v]), D, 2, pcache))
            subs.append(letters[2 * a] + letters[2 * a + 1] + "".join(incoming[v]))
    val = np.einsum(",".join(subs) + "->", *operands, optimize="greedy")
    if isinstance(val, np.ndarray):
        val = val.item()
    return R(val) * sg.sign


def eval_sum(S: KGraphSum, P: PolyBivector, args):
    R = P.ring
    total = R.zero
    for g, c in S:
        v = eval_graph(g, P, args)
        if v:
            total += v * QQ(c.numerator, c.denominator)
    return total


def bracket(P: PolyBivector, f, g):
    """The bracket ``{f, g} = P^{ij} d_i f d_j g`` computed directly."""
    R = P.ring
    f, g = R(f), R(g)
    out = R.zero
    for (i, j), p in P.comps.items():
        out += p * (_diff(f, (i,)) * _diff(g, (j,)) - _diff(f, (j,)) * _diff(g, (i,)))
    return out


def monomials(dim: int, max_degree: int, min_degree: int = 1) -> list:
    R = poly_ring(dim)
    out = []
    for d in range(min_degree, max_degree + 1):
        for combo in itertools.combinations_with_replacement(range(dim), d):
            m = R.one
            for i in combo:
                m *= R.gens[i]
            out.append(m)
    return out


def jacobi_check(P: PolyBivector, max_degree: int = 3) -> bool:
    """True iff the Jacobiator graph sum vanishes on all triples of monomials.

    Only increasing triples are tried since the Jacobiator is totally skew.
    """
    from .multivec import jacobiator

    J = jacobiator()
    mons = monomials(P.dim, max_degree)
    for f, g, h in itertools.combinations(mons, 3):
        if eval_sum(J, P, [f, g, h]):
            return False
    return True


def random_bivector(dim: int, degree: int, rng: random.Random, density: float = 1.0) -> PolyBivector:
    """Random bivector whose components are random polynomials of degree <= ``degree``."""
    R = poly_ring(dim)
    mons = [R.one] + monomials(dim, degree)
    comps = {}
    for i, j in itertools.combinations(range(dim), 2):
        p = R.zero
        for m in mons:
            if rng.random() < density:
                p += m * QQ(rng.randint(-5, 5), rng.randint(1, 3))
        comps[(i, j)] = p
    return PolyBivector(dim, comps)


def sl2_bivector() -> PolyBivector:
    """The linear bivector with ``P^12 = x3, P^13 = -x2, P^23 = x1``."""
    R = poly_ring(3)
    x1, x2, x3 = R.gens
    return PolyBivector(3, {(0, 1): x3, (0, 2): -x2, (1, 2): x1})


_TERM = re.compile(r"^([+-]?[0-9/]*)\*?((?:x\d+(?:\^\d+)?\*?)*)$")


def parse_poly(text: str, dim: int):
    """Parse ``c x1^a x2^b + ...``; terms are separated by ``+``/``-`` signs."""
    R = poly_ring(dim)
    s = text.replace(" ", "")
    if not s:
        raise GraphError("empty polynomial")
    out = R.zero
    for tok in re.findall(r"[+-]?[^+-]+", s):
        m = _TERM.match(tok)
        if not m:
            raise GraphError(f"bad polynomial term {tok!r}")
        c, mono = m.groups()
        coeff = Fraction(1 if c in ("", "+") else -1 if c == "-" else Fraction(c))
        term = R(QQ(coeff.numerator, coeff.denominator))
        for var, _, exp in re.findall(r"x(\d+)(\^(\d+))?", mono):
            i = int(var)
            if not 1 <= i <= dim:
                raise GraphError(f"variable x{i} outside dimension {dim}")
            term *= R.gens[i - 1] ** int(exp or 1)
        out += term
    return out


def parse_bivector(text: str) -> PolyBivector:
    """File format: ``dim D`` header, then lines ``i j <polynomial>`` (1-based)."""
    dim = None
    comps = {}
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("dim"):
            dim = int(line.split()[1])
            continue
        if dim is None:
            raise GraphError("bivector file must start with 'dim D'")
        i, j, poly = line.split(None, 2)
        comps[(int(i) - 1, int(j) - 1)] = parse_poly(poly, dim)
    if dim is None:
        raise GraphError("missing 'dim D' header")
    return PolyBivector(dim, comps)


# -- analytic multivectors ----------------------------------------------------
#
# A p-vector is a dict {increasing index tuple I: A^I}, i.e. sum_I A^I theta_I
# in the odd variables theta_1..theta_D.  Its value on (f_1..f_p) is
# sum_I A^I det(d_{I_a} f_b).


def _merge_sign(I, J):
    """Sign of sorting theta_I theta_J, or 0 when they share an index."""
    if set(I) & set(J):
        return 0, None
    inv = sum(1 for a in I for b in J if a > b)
    return (-1 if inv % 2 else 1), tuple(sorted(I + J))


def _theta_derivative(A: dict, i: int) -> dict:
    out = {}
    for I, p in A.items():
        if i in I:
            m = I.index(i)
            out[I[:m] + I[m + 1:]] = -p if m % 2 else p
    return out


def _super_mul(A: dict, B: dict, R) -> dict:
    out: dict = {}
    for I, a in A.items():
        for J, b in B.items():
            s, K = _merge_sign(I, J)
            if s:
                out[K] = out.get(K, R.zero) + (a * b if s > 0 else -(a * b))
    return {K: p for K, p in out.items() if p}


def _add(A: dict, B: dict, R, factor=1) -> dict:
    out = dict(A)
    for K, p in B.items():
        out[K] = out.get(K, R.zero) + (p if factor == 1 else -p)
    return {K: p for K, p in out.items() if p}


def _pre_schouten(A: dict, p: int, B: dict, R) -> dict:
    """``(-1)^p sum_i dA/dtheta_i dB/dx^i`` with left theta-derivatives."""
    out: dict = {}
    for i, x in enumerate(R.gens):
        dB = {I: b.diff(x) for I, b in B.items()}
        out = _add(out, _super_mul(_theta_derivative(A, i), dB, R), R, factor=(-1) ** p)
    return out


def schouten_analytic(A: dict, p: int, B: dict, q: int, dim: int) -> dict:
    """``[A, B] = A o B - (-1)^((p-1)(q-1)) B o A``, ``A o B`` as in ``_pre_schouten``."""
    R = poly_ring(dim)
    sign = -1 if (p - 1) * (q - 1) % 2 else 1
    out = _add(_pre_schouten(A, p, B, R), _pre_schouten(B, q, A, R), R, factor=-sign)
    return {K: v for K, v in out.items() if v}


def bivector_components(P: PolyBivector) -> dict:
    return dict(P.comps)


def graph_components(S: KGraphSum, P: PolyBivector, n: int) -> dict:
    """Components ``A^I = A(x_I1, .., x_In)`` of a skew multivector sum."""
    R = P.ring
    out = {}
    for I in itertools.combinations(range(P.dim), n):
        v = eval_sum(S, P, [R.gens[i] for i in I])
        if v:
            out[I] = v
    return out


def eval_analytic(A: dict, args, dim: int):
    R = poly_ring(dim)
    args = [R(f) for f in args]
    total = R.zero
    for I, a in A.items():
        det = R.zero
        for perm in itertools.permutations(range(len(I))):
            term = R.one
            for row, col in enumerate(perm):
                term *= args[col].diff(R.gens[I[row]])
                if not term:
                    break
            if term:
                inv = sum(1 for x, y in itertools.combinations(perm, 2) if x > y)
                det += -term if inv % 2 else term
        total += a * det
    return total

"""Kontsevich graphs of type (n, k).

Sinks are ``0..n-1``; internal vertex ``n + a`` owns the ordered target pair
``targets[a] = (L, R)``.  Relabelling internal vertices costs no sign (edges
move in pairs) while swapping ``L`` and ``R`` at one vertex costs ``-1``.  The
normal form minimizes the target list read as a 2k-digit base-(n+k) number
over ``S_k x Z_2^k``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator

from .graph_core import GraphError, permutation_sign

__all__ = [
    "KontsevichGraph",
    "SignedKontsevichGraph",
    "KGraphSum",
    "decode",
    "encode",
    "normal_form",
    "normal_form_labelled",
    "relabel_sinks",
    "alt",
    "parse_kgraph_sum",
    "format_kgraph_sum",
    "WEDGE",
]


@dataclass(frozen=True, order=True)
class KontsevichGraph:
    n: int
    k: int
    targets: tuple  # k pairs (L, R)

    def __post_init__(self):
        if self.n < 1 or self.k < 0:
            raise GraphError(f"bad type ({self.n},{self.k})")
        if len(self.targets) != self.k:
            raise GraphError(f"expected {self.k} target pairs, got {len(self.targets)}")
        top = self.n + self.k
        for a, pair in enumerate(self.targets):
            if len(pair) != 2:
                raise GraphError(f"target pair {pair} is not a pair")
            for t in pair:
                if not 0 <= t < top:
                    raise GraphError(f"target {t} out of range 0..{top - 1}")
                if t == self.n + a:
                    raise GraphError(f"tadpole at vertex {t}")

    @classmethod
    def make(cls, n: int, k: int, flat) -> "KontsevichGraph":
        flat = list(flat)
        return cls(n, k, tuple((flat[2 * a], flat[2 * a + 1]) for a in range(k)))

    @property
    def flat(self) -> tuple:
        return tuple(t for pair in self.targets for t in pair)

    def internal(self) -> range:
        return range(self.n, self.n + self.k)

    def edges(self) -> Iterator:
        """Yield ``(source, slot, target)`` with slot 0 for L, 1 for R."""
        for a, pair in enumerate(self.targets):
            for slot, t in enumerate(pair):
                yield self.n + a, slot, t

    def in_degrees(self) -> list:
        deg = [0] * (self.n + self.k)
        for t in self.flat:
            deg[t] += 1
        return deg

    def heads(self, v: int) -> set:
        """Vertices that ``v`` points to."""
        return set(self.targets[v - self.n]) if v >= self.n else set()

    def tails(self, v: int) -> set:
        """Vertices pointing at ``v``."""
        return {u for u, _, t in self.edges() if t == v}

    def has_eye(self) -> bool:
        return any(u in self.heads(t) for u, _, t in self.edges() if t >= self.n)

    def has_double_edge(self) -> bool:
        return any(a == b for a, b in self.targets)

    def is_multivector(self) -> bool:
        deg = self.in_degrees()
        return all(deg[s] == 1 for s in range(self.n))

    def __str__(self):
        return encode(SignedKontsevichGraph(self, 1))


@dataclass(frozen=True)
class SignedKontsevichGraph:
    graph: KontsevichGraph
    sign: int = 1


def encode(sg) -> str:
    if isinstance(sg, KontsevichGraph):
        sg = SignedKontsevichGraph(sg, 1)
    g = sg.graph
    head = f"{g.n} {g.k} {sg.sign}"
    return head + ("  " + " ".join(map(str, g.flat)) if g.k else "")


def decode(text: str) -> SignedKontsevichGraph:
    tokens = text.split()
    if len(tokens) < 3:
        raise GraphError(f"need at least 'n k s', got {text!r}")
    try:
        n, k, s = (int(t) for t in tokens[:3])
    except ValueError as exc:
        raise GraphError(f"bad header token in {text!r}") from exc
    if len(tokens) != 3 + 2 * k:
        raise GraphError(f"expected {3 + 2 * k} tokens for k={k}, got {len(tokens)}")
    if s not in (-1, 0, 1):
        raise GraphError(f"sign token {tokens[2]!r} not in -1, 0, 1")
    flat = []
    for a, tok in enumerate(tokens[3:]):
        try:
            t = int(tok)
        except ValueError as exc:
            raise GraphError(f"bad target token {tok!r}") from exc
        if not 0 <= t < n + k:
            raise GraphError(f"target token {tok!r} out of range 0..{n + k - 1}")
        if t == n + a // 2:
            raise GraphError(f"target token {tok!r} makes a tadpole at vertex {t}")
        flat.append(t)
    return SignedKontsevichGraph(KontsevichGraph.make(n, k, flat), s)


# -- normal form ------------------------------------------------------------

_NF_CACHE: dict = {}


def _minimize(n: int, k: int, targets: tuple, keep_labels: bool = False):
    """Return (minimal flat list, sign) or (flat, 0) for zero graphs.

    With ``keep_labels`` the second item is instead the list of all
    minimizing ``(labelling, sign)`` pairs, a labelling mapping old vertex
    numbers to new ones.
    """
    # a double edge x -> (y, y) is fixed by the L/R swap, so the graph is zero
    double = any(a == b for a, b in targets)
    label = list(range(n)) + [None] * k
    order: list = []
    best = None
    signs: set = set()
    found: list = []

    def bound_after(j):
        # digit lower bounds for positions 0..j; unknown labels are >= n+j+1
        nxt = n + j + 1
        out = []
        for u in order:
            a, b = targets[u - n]
            la, lb = label[a], label[b]
            if la is None and lb is None:
                out += (nxt, nxt) if a == b else (nxt, nxt + 1)
            elif la is None:
                out += (lb, nxt)
            elif lb is None:
                out += (la, nxt)
            else:
                out += (la, lb) if la < lb else (lb, la)
        return out

    def leaf():
        nonlocal best
        flat = []
        sign = 1
        for u in order:
            la, lb = label[targets[u - n][0]], label[targets[u - n][1]]
            if la > lb:
                la, lb = lb, la
                sign = -sign
            flat += (la, lb)
        if best is None or flat < best:
            best = flat
            signs.clear()
            found.clear()
        if flat == best:
            signs.add(sign)
            if keep_labels:
                found.append((tuple(label), sign))

    def dfs(j):
        if j == k:
            leaf()
            return
        options = []
        for u in range(n, n + k):
            if label[u] is None:
                label[u] = n + j
                order.append(u)
                options.append((bound_after(j), u))
                order.pop()
                label[u] = None
        options.sort()
        for bnd, u in options:
            if best is not None and bnd > best[: len(bnd)]:
                break
            label[u] = n + j
            order.append(u)
            dfs(j + 1)
            order.pop()
            label[u] = None

    dfs(0)
    if keep_labels:
        return tuple(best or ()), found
    if double or len(signs) > 1:
        return tuple(best or ()), 0
    return tuple(best or ()), signs.pop() if signs else 1


def normal_form(sg) -> SignedKontsevichGraph:
    """Orbit-minimal representative; sign 0 if the graph equals minus itself."""
    if isinstance(sg, KontsevichGraph):
        sg = SignedKontsevichGraph(sg, 1)
    g = sg.graph
    hit = _NF_CACHE.get(g)
    if hit is None:
        flat, sign = _minimize(g.n, g.k, g.targets)
        hit = _NF_CACHE[g] = (KontsevichGraph.make(g.n, g.k, flat), sign)
    return SignedKontsevichGraph(hit[0], hit[1] * sg.sign)


def normal_form_labelled(g: KontsevichGraph):
    """Normal form graph with every minimizing ``(labelling, sign)`` pair.

    Double-edge zero graphs still report their labellings; callers decide.
    """
    flat, found = _minimize(g.n, g.k, g.targets, keep_labels=True)
    return KontsevichGraph.make(g.n, g.k, flat), found


def relabel_sinks(g: KontsevichGraph, perm) -> KontsevichGraph:
    """Move the content of sink ``s`` to sink ``perm[s]``."""
    n = g.n
    return KontsevichGraph.make(n, g.k, (perm[t] if t < n else t for t in g.flat))


# -- sums -------------------------------------------------------------------


class KGraphSum:
    """Rational combination of Kontsevich graphs keyed by normal form."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {g: Fraction(c) for g, c in (terms or {}).items() if c}

    @classmethod
    def from_terms(cls, pairs: Iterable) -> "KGraphSum":
        """Reduce ``(graph or signed graph, coeff)`` pairs."""
        acc: dict = {}
        for g, c in pairs:
            if not c:
                continue
            nf = normal_form(g)
            if nf.sign:
                acc[nf.graph] = acc.get(nf.graph, 0) + nf.sign * Fraction(c)
        return cls(acc)

    @classmethod
    def of(cls, g, c=1) -> "KGraphSum":
        return cls.from_terms([(g, c)])

    def __iter__(self):
        return iter(self.terms.items())

    def __len__(self):
        return len(self.terms)

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        return isinstance(other, KGraphSum) and self.terms == other.terms

    def __getitem__(self, g):
        nf = normal_form(g)
        return nf.sign * self.terms.get(nf.graph, Fraction(0))

    def _combine(self, other, factor):
        out = dict(self.terms)
        for g, c in other.terms.items():
            v = out.get(g, 0) + factor * c
            if v:
                out[g] = v
            else:
                out.pop(g, None)
        return KGraphSum(out)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __neg__(self):
        return KGraphSum({g: -c for g, c in self.terms.items()})

    def __mul__(self, x):
        return KGraphSum({g: c * x for g, c in self.terms.items()})

    __rmul__ = __mul__

    def types(self) -> set:
        return {(g.n, g.k) for g in self.terms}

    def sorted_items(self) -> list:
        return sorted(self.terms.items(), key=lambda gc: (gc[0].n, gc[0].k, gc[0].flat))

    def __repr__(self):
        return f"KGraphSum({len(self)} terms)"

    def __str__(self):
        return format_kgraph_sum(self)


def alt(s: KGraphSum) -> KGraphSum:
    """Skew-symmetrize over the sinks: sum of sign(p) * (p applied to sink contents)."""
    pairs = []
    for g, c in s:
        for perm in itertools.permutations(range(g.n)):
            pairs.append((relabel_sinks(g, perm), permutation_sign(perm) * c))
    return KGraphSum.from_terms(pairs)


WEDGE = KontsevichGraph(2, 1, ((0, 1),))


def parse_kgraph_sum(text: str) -> KGraphSum:
    """Lines ``n k s  t1 .. t2k  coeff``; ``#`` comments, blank lines skipped."""
    pairs = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        try:
            k = int(tokens[1])
        except (IndexError, ValueError) as exc:
            raise GraphError(f"bad line {raw!r}") from exc
        body = tokens[: 3 + 2 * k]
        rest = tokens[3 + 2 * k:]
        if len(rest) > 1:
            raise GraphError(f"trailing tokens in {raw!r}")
        sg = decode(" ".join(body))
        pairs.append((sg, Fraction(rest[0]) if rest else Fraction(1)))
    return KGraphSum.from_terms(pairs)


def format_kgraph_sum(s: KGraphSum) -> str:
    return "".join(f"{encode(g)}  {c}\n" for g, c in s.sorted_items())

"""Command-line interface: ``python3 -m kgflow <subcommand> ...``.

Exit status is 0 on success, 1 when the input is rejected by the library
(the message names the module and the reason) and 2 on usage errors.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import logging
import os
import random
import sys
import tempfile
import time
from fractions import Fraction

from . import __version__
from .graph_core import (
    GraphError,
    canonical_form,
    enumerate_undirected,
    format_graph_sum,
    parse_graph_sums,
    parse_graph_terms,
    wheel,
)

log = logging.getLogger("kgflow")


class DomainError(Exception):
    """Input rejected by one of the library modules."""

    def __init__(self, module: str, message: str):
        super().__init__(f"{module}: {message}")
        self.module = module


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _text_or_file(args) -> str:
    if getattr(args, "text", None):
        return "\n".join(args.text) + "\n"
    return _read(args.input)


# -- subcommands ----------------------------------------------------------------


def cmd_normalize(args) -> str:
    from .kgraph import decode, encode, normal_form

    text = _text_or_file(args)
    out = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if args.undirected:
            ((g, _),) = parse_graph_terms(line)
            sg = canonical_form(g)
            out.append(f"{sg.graph}  {sg.sign}")
        else:
            out.append(encode(normal_form(decode(line))))
    return "\n".join(out) + "\n"


def cmd_reduce(args) -> str:
    from .kgraph import format_kgraph_sum, parse_kgraph_sum

    text = _read(args.input)
    if args.undirected:
        return format_graph_sum(parse_graph_sums(text))
    return format_kgraph_sum(parse_kgraph_sum(text))


def cmd_gen(args) -> str:
    from .kgraph import format_kgraph_sum
    from .multivec import gen_bi_vectors, gen_one_vectors, gen_tri_vectors

    if args.kind == "undirected":
        e = args.e if args.e is not None else 2 * args.k - 2
        graphs = enumerate_undirected(args.k, e, min_degree=args.min_degree, connected=True)
        return "".join(f"{sg.graph}  {sg.sign}\n" for sg in graphs)
    gen = {"1vec": gen_one_vectors, "2vec": gen_bi_vectors, "3vec": gen_tri_vectors}[args.kind]
    blocks = [format_kgraph_sum(s) for s in gen(args.k, allow_eyes=not args.no_eyes)]
    return "\n".join(blocks)


def cmd_gc(args) -> str:
    from .graph_complex import cocycle_space, differential, is_exact, lie_bracket

    if args.action == "d":
        return format_graph_sum(differential(parse_graph_sums(_read(args.input))))
    if args.action == "bracket":
        a = parse_graph_sums(_read(args.left))
        b = parse_graph_sums(_read(args.right))
        return format_graph_sum(lie_bracket(a, b))
    if args.action == "cocycles":
        blocks = []
        for z in cocycle_space(args.k, min_degree=args.min_degree):
            w = wheel(args.k - 1)
            if z[w]:
                z = z.normalized(w)
            blocks.append(format_graph_sum(z))
        return "\n".join(blocks) if blocks else "# no cocycles\n"
    if args.action == "is-exact":
        s = parse_graph_sums(_read(args.input))
        exact, witness = is_exact(s, use_fast_path=not args.no_fast_path)
        if not exact:
            return "not exact\n"
        return "exact\n" + format_graph_sum(witness)
    raise AssertionError(args.action)


def cmd_orient(args) -> str:
    from .kgraph import encode, format_kgraph_sum
    from .orient import orient, oriented_flow, skew_span

    gamma = parse_graph_sums(_read(args.graph))
    if args.flow:
        flows = oriented_flow(gamma, method=args.method)
        if not flows:
            raise DomainError("orient", "no flow in the span of the orientations")
        return "\n".join(format_kgraph_sum(f) for f in flows)
    graphs = []
    for g, _ in gamma:
        graphs.extend(orient(g))
    if args.skew:
        return "\n".join(format_kgraph_sum(s) for s in skew_span(graphs))
    seen = {}
    for sg in graphs:
        seen.setdefault(sg.graph, sg)
    return "".join(encode(sg) + "\n" for _, sg in sorted(seen.items()))


def cmd_leibniz(args) -> str:
    from .kgraph import KGraphSum, format_kgraph_sum, parse_kgraph_sum
    from .leibniz import expand, expand_skew, format_leibniz, gen_leibniz, iterative_layers, parse_leibniz

    if args.action == "expand":
        total = KGraphSum()
        for L, c in parse_leibniz(_read(args.input)):
            total = total + (expand_skew(L) if args.skew else expand(L)) * c
        return format_kgraph_sum(total)
    if args.action == "generate":
        graphs = gen_leibniz(args.k, args.n, multivector_only=not args.all_targets)
        return "".join(format_leibniz(L) + "\n" for L in graphs)
    if args.action == "layers":
        state = iterative_layers(parse_kgraph_sum(_read(args.input)), max_iter=args.max_iter)
        head = f"# cumulative counts {' '.join(map(str, state.counts))}"
        head += " (stable)\n" if state.stable else " (not stable)\n"
        return head + "".join(format_leibniz(L) + "\n" for L in state.table)
    raise AssertionError(args.action)


def cmd_factor(args) -> str:
    from .factor import classify_flows, solve_factorization, sparse_solution
    from .kgraph import alt, parse_kgraph_sum
    from .leibniz import format_leibniz

    if args.action == "classify":
        return classify_flows(args.k, allow_eyes=not args.no_eyes).summary() + "\n"
    Q = parse_kgraph_sum(_read(args.flow))
    if args.skew:
        Q = alt(Q) * Fraction(1, 2)
    res = solve_factorization(Q, method=args.method, max_iter=args.max_iter)
    if not res.consistent:
        return "# inconsistent: no factorization in this ansatz\n"
    if args.sparse:
        res = sparse_solution(res)
    lines = [
        f"# consistent; {len(res.problem.table)} skew Leibniz graphs in the ansatz, "
        f"kernel dimension {res.kernel_dim}, {len(res.diamond)} used"
    ]
    if res.counts:
        lines.append(f"# cumulative layer counts {' '.join(map(str, res.counts))}")
    lines += [format_leibniz(L, c) for L, c in res.diamond]
    return "\n".join(lines) + "\n"


def cmd_eval(args) -> str:
    from .kgraph import parse_kgraph_sum
    from .poisson_eval import eval_sum, parse_bivector, parse_poly

    S = parse_kgraph_sum(_read(args.graphs))
    P = parse_bivector(_read(args.bivector))
    polys = []
    for raw in _read(args.args).splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            polys.append(parse_poly(line, P.dim))
    ns = {g.n for g, _ in S}
    if ns and ns != {len(polys)}:
        raise DomainError("poisson_eval", f"graphs take {sorted(ns)} arguments, got {len(polys)}")
    return f"{eval_sum(S, P, polys)}\n"


# -- parser ---------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="kgflow", description="Graph complex and Kontsevich graph workbench")
    p.add_argument("--version", action="version", version=f"kgflow {__version__}")
    p.add_argument("--threads", type=int, default=1, help="cap on internal parallelism (results do not depend on it)")
    p.add_argument("--seed", type=int, default=0, help="seed for randomized steps")
    p.add_argument("--output", "-o", default="-", help="output file, written atomically (default stdout)")
    p.add_argument("--manifest", help="write a JSON run manifest to this path")
    p.add_argument("--verbose", "-v", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("normalize", help="normal forms of graph encodings")
    s.add_argument("text", nargs="*", help="encodings; read --input when absent")
    s.add_argument("--input", "-i", default="-")
    s.add_argument("--undirected", action="store_true", help="lines are 'k e edges' undirected graphs")
    s.set_defaults(func=cmd_normalize, module="kgraph")

    s = sub.add_parser("reduce", help="collect like terms of a graph sum")
    s.add_argument("--input", "-i", default="-")
    s.add_argument("--undirected", action="store_true")
    s.set_defaults(func=cmd_reduce, module="kgraph")

    s = sub.add_parser("gen", help="generate multivector or undirected graphs")
    s.add_argument("kind", choices=["1vec", "2vec", "3vec", "undirected"])
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--e", type=int, help="edge count for undirected graphs (default 2k-2)")
    s.add_argument("--min-degree", type=int, default=3)
    s.add_argument("--no-eyes", action="store_true")
    s.set_defaults(func=cmd_gen, module="multivec")

    s = sub.add_parser("gc", help="non-oriented graph complex")
    gsub = s.add_subparsers(dest="action", required=True)
    a = gsub.add_parser("d")
    a.add_argument("--input", "-i", default="-")
    a = gsub.add_parser("bracket")
    a.add_argument("left")
    a.add_argument("right")
    a = gsub.add_parser("cocycles")
    a.add_argument("--k", type=int, required=True)
    a.add_argument("--min-degree", type=int, default=3)
    a = gsub.add_parser("is-exact")
    a.add_argument("--input", "-i", default="-")
    a.add_argument("--no-fast-path", action="store_true")
    s.set_defaults(func=cmd_gc, module="graph_complex")

    s = sub.add_parser("orient", help="orient an undirected graph sum onto two sinks")
    s.add_argument("--graph", "-g", default="-")
    s.add_argument("--skew", action="store_true", help="emit the skew sums, one per sink orbit")
    s.add_argument("--flow", action="store_true", help="solve for a flow in the oriented span")
    s.add_argument("--method", choices=["full", "iterative"], default="full")
    s.set_defaults(func=cmd_orient, module="orient")

    s = sub.add_parser("leibniz", help="Leibniz graphs")
    lsub = s.add_subparsers(dest="action", required=True)
    a = lsub.add_parser("expand")
    a.add_argument("--input", "-i", default="-")
    a.add_argument("--skew", action="store_true")
    a = lsub.add_parser("generate")
    a.add_argument("--k", type=int, required=True)
    a.add_argument("--n", type=int, default=3)
    a.add_argument("--all-targets", action="store_true", help="do not restrict to multivectors")
    a = lsub.add_parser("layers")
    a.add_argument("--input", "-i", default="-")
    a.add_argument("--max-iter", type=int, default=10)
    s.set_defaults(func=cmd_leibniz, module="leibniz")

    s = sub.add_parser("factor", help="factorization problem and flow classification")
    fsub = s.add_subparsers(dest="action", required=True)
    a = fsub.add_parser("solve")
    a.add_argument("--flow", required=True)
    a.add_argument("--method", choices=["iterative", "full"], default="iterative")
    a.add_argument("--max-iter", type=int, default=10)
    a.add_argument("--skew", action="store_true", help="alternate the input and halve it first")
    a.add_argument("--sparse", action="store_true", help="try to shrink the support")
    a = fsub.add_parser("classify")
    a.add_argument("--k", type=int, required=True)
    a.add_argument("--no-eyes", action="store_true")
    s.set_defaults(func=cmd_factor, module="factor")

    s = sub.add_parser("eval", help="evaluate a graph sum on polynomial data")
    s.add_argument("--graphs", required=True)
    s.add_argument("--bivector", required=True)
    s.add_argument("--args", required=True)
    s.set_defaults(func=cmd_eval, module="poisson_eval")
    return p


def _write(path: str, text: str):
    if path == "-":
        sys.stdout.write(text)
        return
    folder = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=folder, prefix=".kgflow-")
    with os.fdopen(fd, "w", encoding="utf-8") as fh:
        fh.write(text)
    os.replace(tmp, path)


def _digest(text: str) -> str:
    return hashlib.sha256(text.encode()).hexdigest()


def _input_digests(args) -> dict:
    out = {}
    for key in ("input", "graph", "flow", "graphs", "bivector", "args", "left", "right"):
        path = getattr(args, key, None)
        if isinstance(path, str) and path != "-" and os.path.isfile(path):
            out[path] = _digest(_read(path))
    return out


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)  # exits with status 2 on usage errors
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(name)s: %(message)s")
    random.seed(args.seed)
    start = time.perf_counter()
    try:
        text = args.func(args)
    except DomainError as exc:
        print(f"kgflow {exc}", file=sys.stderr)
        return 1
    except (GraphError, ValueError, ZeroDivisionError) as exc:
        print(f"kgflow {args.module}: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"kgflow {args.module}: {exc}", file=sys.stderr)
        return 1
    _write(args.output, text)
    if args.manifest:
        flags = {k: v for k, v in vars(args).items() if k not in ("func", "manifest")}
        manifest = {
            "subcommand": args.command,
            "flags": flags,
            "inputs": _input_digests(args),
            "version": __version__,
            "elapsed": round(time.perf_counter() - start, 3),
            "result": _digest(text),
        }
        _write(args.manifest, json.dumps(manifest, indent=2, sort_keys=True, default=str) + "\n")
    return 0


def main():
    sys.exit(run())

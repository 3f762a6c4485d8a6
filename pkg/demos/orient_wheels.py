"""Orient the tetrahedron and the pentagon-wheel cocycle onto two sinks."""
from kgflow.graph_core import GraphSum, UndirectedGraph, parse_graph_sums
from kgflow.orient import orient, oriented_flow, skew_span

GAMMA5 = """\
6 10  14 15 16 23 25 26 34 36 46 56  1
6 10  14 15 16 23 25 26 34 36 45 56  5/2
"""


def main():
    tetra = UndirectedGraph(4, ((1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)))
    graphs = orient(tetra)
    print(f"tetrahedron: {len(graphs)} oriented graphs, {len(skew_span(graphs))} skew sums")
    (flow,) = oriented_flow(GraphSum.of(tetra))
    print("flow in their span:")
    print(flow, end="")

    gamma5 = parse_graph_sums(GAMMA5)
    graphs = [sg for g, _ in gamma5 for sg in orient(g)]
    print(f"pentagon wheel cocycle: {len(graphs)} oriented graphs, {len(skew_span(graphs))} skew sums")


if __name__ == "__main__":
    main()

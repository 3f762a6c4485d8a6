"""Cocycles of the non-oriented graph complex on 4 to 8 vertices.

Run with ``python3 demos/graph_cocycles.py``; takes a few seconds.
"""
from kgflow.graph_complex import cocycle_space, cohomology_ratio, heptagon_wheel_cocycle, is_exact
from kgflow.graph_core import format_graph_sum, wheel


def main():
    for k in range(4, 9):
        reps = cocycle_space(k)
        print(f"k={k}: {len(reps)} nontrivial class(es)")
        for z in reps:
            spokes = k - 1
            if spokes % 2:
                z = z.normalized(wheel(spokes))
            print(f"  {len(z)} terms, exact: {is_exact(z)[0]}")
            if len(z) <= 4:
                print(format_graph_sum(z), end="")
    table = heptagon_wheel_cocycle()
    (z8,) = cocycle_space(8)
    print("k=8 representative vs tabulated cocycle: ratio", cohomology_ratio(z8, table))


if __name__ == "__main__":
    main()

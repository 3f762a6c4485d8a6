"""Exact computations with the non-oriented graph complex and Kontsevich graphs.

Submodules: ``graph_core`` and ``graph_complex`` (non-oriented graphs and the
differential), ``kgraph`` (Kontsevich graphs and normal forms), ``multivec``
(multivectors and the Schouten bracket), ``leibniz`` (Leibniz graphs),
``orient`` (orientation onto two sinks), ``factor`` (the factorization
problem), ``exactla`` (rational linear algebra) and ``poisson_eval``
(evaluation on polynomial bivectors).
"""

__version__ = "0.1.0"

"""Left-symmetric algebras, para-Kähler phase spaces and Hessian structures.

Modules:
    algcore     structure tensors, axiom checks, power ideals, JSON I/O
    phasespace  phase space of a left-symmetric algebra, quasi-S-matrices
    hessdual    Hessian structures on orbits in the dual of a commutative
                associative algebra
    chartgeom   symmetric bivector fields on a flat chart
    catalog     the six worked examples with their asserted facts
    cli         command-line front end
"""
__version__ = "0.1.0"

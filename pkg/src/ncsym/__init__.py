"""Exact conformal symmetry algebras of Newton-Cartan spacetime.

Symbolic layer: exact rational polynomials, Lie calculus, flat
Newton-Cartan data and linear solvers reconstructing the conformal
symmetry families with their structure constants and matrix
representations.  Numeric layer: presymplectic particle models, fluid
scaling symmetries and Galilean electromagnetism used to exercise the
algebras dynamically.
"""

from .poly import Poly, as_fraction
from .lie import (
    Connection,
    OneForm,
    SymTensor2Up,
    TwoForm,
    VectorField,
    canonical_lift,
    conformal_factors,
    exterior_derivative,
    exterior_derivative_one_form,
    lie_bracket,
    lie_derive_connection,
    lie_derive_one_form,
    lie_derive_structure,
    lie_derive_sym2up,
    lie_derive_two_form,
)
from .geometry import (
    GalileiStructure,
    NCStructure,
    Observer,
    connection_from_observer,
    coriolis_from_observer,
    flat_galilei,
    flat_structure,
    milne_boost,
    newtonian_connection,
    rest_observer,
    vary_connection,
)
from .solver import (
    INF,
    AlgebraBasis,
    ClosureReport,
    NotClosedError,
    StructureConstants,
    alt_subalgebra,
    closure_check,
    parse_z,
    restrict_cmil_z,
    restrict_sch_z,
    solve_cga,
    solve_cgal,
    solve_cgal_z,
    solve_cmil_flat,
    solve_cnc_flat,
    solve_gal,
    solve_sch,
    solve_sch_expanded,
    structure_constants,
)

__version__ = "0.1.0"

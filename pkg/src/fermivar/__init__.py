"""fermivar: exact Floquet determinants, Fermi-variety certificates and
band structure for discrete periodic Schrodinger operators on Z^d."""

__version__ = "0.1.0"

from .rationals import GaussianRational, mpq, parse_scalar, format_scalar
from .polynomials import (LAMBDA, LaurentPoly, MultiPoly,
                          weighted_lowest_component, zl_vars, zvars)
from .lattice import (DftTable, LatticeSpec, PeriodicPotential,
                      build_potential, dft, potential_from_rows)
from .floquet import (assemble_fourier, assemble_numeric, assemble_symbolic,
                      verify_equivalence)
from .charpoly import CharPolyBundle, charpoly_exact, check_facts
from .variety import (IrreducibilityCertificate, RootsProductSpec,
                      certify_irreducible, degree_bound_check,
                      factor_at_average, htilde, lowest_component_check,
                      singular_points_d2, squarefree_check)
from .spectrum import (BandStructure, Extremum, Perturbation, compute_bands,
                       embedded_scan, find_extrema, free_operator_checks,
                       hf_gradient, level_set_check)

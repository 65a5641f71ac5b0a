"""Numerical toolkit for equilibrium measures of quaternionic polynomials.

Slice-regular polynomial algebra (star product, symmetrization, bullet
composition), one-slice complex dynamics with Green's functions and preimage
measures, the slice Laplacian with its fundamental solutions, dynamical
statistics (Lyapunov, mixing, CLT, entropy), and the one-slice / general
coefficient constructions, behind a reproducible CLI.
"""

__version__ = "0.1.0"

from .errors import (BudgetExceeded, CoefficientOffSlice, ConfigError,
                     DegenerateSample, DegenerateVariance, ExceptionalTarget,
                     ProbeOnFiber, QBrolinError, SingularNode, SolverFailure,
                     ZeroDivisor)
from .policy import DEFAULT, NumericPolicy
from .quat import (ImaginaryUnit, Quaternion, SlicePoint, Sphere2,
                   SphereQuadrature, UNIT_I, UNIT_J, UNIT_K, slice_decompose,
                   sphere_quadrature)
from .poly import ComplexPoly, QPolynomial
from .grids import GridField, SliceGrid
from .cdyn import (EscapeParams, OrbitValue, escape_radius, filled_julia_mask,
                   green_field, green_n, is_exceptional, iterate,
                   preimage_tree, solve_fiber)
from .measures import (AtomicMass, EmpiricalMeasure, TestFunction,
                       brolin_pullback, measure_from_complex_atoms, pair,
                       pullback, pushforward, slice_marginal, standard_panel,
                       weak_distance)
from .laplacian import (fundamental_solution_check, log_distance_field,
                        measure_from_green, raster_to_measure,
                        refinement_order, slice_laplacian,
                        sphere_kernel_check)
from .dynstats import (AxialBox, CltResult, EstimateReport, calibrate_ks_null,
                       clt_harness, lyapunov_slice, lyapunov_sphere_direction,
                       mixing_correlation, partition_entropy, sample_mu,
                       separated_count, topological_entropy, transfer_apply)
from .slicecases import (GeneralIterate, OneSlicePolynomial, brolin3_gap,
                         gn_build, gn_pullback_measure, hn_build,
                         mu_prime_estimate, orbit_finite)

"""Global numeric policy: every tolerance that appears in more than one place.

A single mutable instance `DEFAULT` is shared by the library; callers that
need different thresholds construct their own record and pass it explicitly.
"""

from dataclasses import dataclass, field


@dataclass
class NumericPolicy:
    # absolute tolerance on the off-plane component in restrict_to_slice
    off_slice_tol: float = 1e-12
    # relative residual bound for certified fiber roots: |p(z)-w| <= tol*(1+|w|)
    fiber_residual_tol: float = 1e-9
    # clustering radius (times scale) for multiplicity detection
    cluster_tol: float = 1e-7
    # |Im z| below cluster scale counts as a real root in atom classification
    real_axis_tol: float = 1e-7
    # default backward-orbit burn-in
    burn_in: int = 30
    # depth of the exceptional-point screening
    exceptional_depth: int = 5
    # hard cap on polynomial coefficient counts
    degree_budget: int = 4096
    # Aberth iteration controls
    aberth_max_iter: int = 200
    aberth_tol: float = 1e-14


DEFAULT = NumericPolicy()

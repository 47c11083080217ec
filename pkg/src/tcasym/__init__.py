"""tcasym: dual-path numerical engine for the Tricomi-Carlitz polynomials.

Two independent evaluation paths for the rescaled monic polynomials:

* an exact path (``tcasym.exact``): the three-term recurrence in
  configurable-precision arithmetic with log-scale renormalization, plus
  the discrete orthogonality machinery (nodes, masses, truncated sums
  with tail bounds);
* an asymptotic path (``tcasym.asym``): region-wise uniform leading-order
  formulas covering the whole plane, including an Airy-type form through
  the turning point at the band edge and a dedicated form at the origin
  where the orthogonality nodes accumulate.

``tcasym.harness`` quantifies agreement between the two paths
(convergence-order fits, cross-region consistency, fixed-argument limit
checks, orthogonality reports); ``tcasym.cli`` exposes everything on the
command line.

Hot loops run on compiled MPFR kernels when the optional extension built
(see ``tcasym._accel.BACKEND``), with a pure-Python fallback that
reproduces the recurrence bit for bit.
"""

from ._accel import BACKEND, HAVE_COMPILED
from .asym import AsymResult, Params, RegionLabel, classify_region, eval_asym
from .exact import (
    NodeMass,
    OrthoSum,
    eval_f,
    eval_monic_rescaled,
    h_norm,
    log_leading_coeff,
    nodes_masses,
    ortho_matrix,
    ortho_sum,
    weight_wd,
)
from .harness import (
    ConvergenceFit,
    EvalRecord,
    boundary_consistency,
    compare_point,
    convergence_fit,
    darboux_check,
    ortho_report,
    region_grid,
    region_table,
)
from .mpnum import (
    DEFAULT_PREC,
    ConfigError,
    DomainError,
    LogComplex,
    PoleError,
    Precision,
    logc_add,
    logc_div,
    logc_mul,
    logc_pow,
    pow_principal,
    sqrt_zsq_minus4,
)
from .specfun import AiryQuartet, airy_quartet, log_gamma_complex

__version__ = "0.1.0"

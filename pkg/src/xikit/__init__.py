"""High-precision Riemann xi coefficient families and their cross-checks.

Computes the positive expansion coefficients xi_r of xi(1/2+s), the Li
coefficients a_n (two independent routes), Keiper-Li lambda_n, the C_{n,p}
recurrence triangle and its moment sums, sandwich-inequality scans along
the real axis and the critical line, singularity diagnostics and the
asymptotic fits built on all of the above. A CLI (``xikit``) drives batch
runs and persists results as diffable text caches.
"""

__version__ = "0.1.0"

from .context import PrecisionContext
from .errors import (CenterMismatch, InvariantViolation, PrecisionRefusal,
                     QuadratureError, XikitError)
from .series import (PowerSeries, binomial_ratio_coeffs, binomial_ratio_series,
                     series_add, series_diff, series_exp, series_integrate,
                     series_log, series_mul, series_reciprocal)
from .xi import (EvenOddCoefficients, XiCoefficients, even_odd_coeffs,
                 phi_weight, xi_eval, xi_pm_eval, xi_pm_series, xi_r_table)
from .mobius import Locus, MobiusMap, locus_emit, make_map, mobius_apply, w_plane_form
from .li import (BoundsReport, CnpTable, LiCoefficients, SigmaTable,
                 a1_closed_form, an_bounds_check, an_oracle,
                 an_recurrence_residual, cnp_build, li_an, li_an_streaming,
                 sigma_table)
from .lambdas import (LambdaSequence, SingularityDiagnostics, inverse_phi_series,
                      lambda_sequence, log_xi_series, phi_series,
                      radius_estimates, titchmarsh_bn)
from .analysis import (AsymReport, CollapseReport, FitResult, ScanEvent,
                       ScanReport, asym_check, circle_scan, cnp_fit,
                       cnp_peak_scan, continuum_collapse, fit_log_an, jm_scan,
                       pa_table, sandwich_scan_real, theta_for_height)

__all__ = [name for name in dir() if not name.startswith("_")]

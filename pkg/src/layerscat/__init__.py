"""Boundary-integral solver for 2D acoustic scattering by a rough surface
below a two-layered medium interface."""

from .bie import (BoundaryProblem, KernelSplit, cutoff_chi, kernel_dbvp_raw,
                  kernel_ibvp_raw, rhs_dbvp, rhs_ibvp, split_dbvp, split_ibvp)
from .errors import (AccuracyError, ConfigError, DomainError, LayerScatError,
                     SingularityError, SolverError)
from .green import (MediumPair, fresnel_R, fresnel_T, grad_green_x,
                    grad_green_y, green, green_remainder, phi_free,
                    reference_field_plane, reference_field_plane_grad,
                    transmitted_direction)
from .nystrom import DensitySolution, Grid, assemble, log_weight, solve
from .potentials import (FieldSample, FourWaveSolution, eval_scattered,
                         eval_scattered_dbvp, eval_scattered_ibvp,
                         four_wave_exact, point_source_exact, total_field)
from .specfun import (bessel_j, bessel_y, critical_angle, hankel1,
                      sqrt_branch1, sqrt_branch2, vertical_wavenumber)
from .surface import SurfaceProfile, builtin, from_callables

__version__ = "0.1.0"

__all__ = [
    "AccuracyError", "BoundaryProblem", "ConfigError", "DensitySolution",
    "DomainError", "FieldSample", "FourWaveSolution", "Grid", "KernelSplit",
    "LayerScatError", "MediumPair", "SingularityError", "SolverError",
    "SurfaceProfile", "assemble", "bessel_j", "bessel_y", "builtin",
    "critical_angle", "cutoff_chi", "eval_scattered", "eval_scattered_dbvp",
    "eval_scattered_ibvp", "four_wave_exact", "fresnel_R", "fresnel_T",
    "from_callables", "grad_green_x", "grad_green_y", "green",
    "green_remainder", "hankel1", "kernel_dbvp_raw", "kernel_ibvp_raw",
    "log_weight", "phi_free", "point_source_exact", "reference_field_plane",
    "reference_field_plane_grad", "rhs_dbvp", "rhs_ibvp", "solve",
    "split_dbvp", "split_ibvp", "sqrt_branch1", "sqrt_branch2",
    "total_field", "transmitted_direction", "vertical_wavenumber",
]

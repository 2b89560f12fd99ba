"""Kernels, Cauchy solvers and identity checks for the singular heat and wave equations."""
from .errors import (ConvergenceError, DegeneracyError, DomainError, LightConeError, PoleError,
                     SingKernError)
from .kernels import (KERNELS, GeneralSolutionCoeffs, KernelQuery, NormalizationTable, classical_heat_kernel,
                      classical_wave_kernel, evaluate_kernel, heat_general_solution, heat_kernel, ladder_apply,
                      odd_wave_norm_const, scaled_heat_kernel, wave_general_solution, wave_kernel,
                      wave_kernel_2d, wave_kernel_even, wave_kernel_odd)
from .data import Bump, Gaussian, GridDatum, RadialPoly, SumDatum, spherical_mean
from .quadrature import QuadratureSpec, Scheme, integrate_1d
from .solvers import (SolveRequest, SolveResult, solve, solve_heat, solve_wave_2d, solve_wave_even,
                      solve_wave_odd)

__version__ = "0.1.0"

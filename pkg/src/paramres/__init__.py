"""Quantum harmonic oscillator ground state under a parametric frequency drive."""

__version__ = "0.1.0"

from .core import N0, DriveParams, GaussianState, SimConfig, g_eval, ground_state, tau_final
from .errors import (DegenerateFit, InsufficientPoints, IntegrationFailure, InvalidParameter,
                     NoCrossing, NumericalFailure, ParamResError, QuadratureNonConvergence,
                     UndefinedRatio, UnitarityViolation)
from .dynamics import TrajectorySample, evolve, evolve_fixed_step, evolve_traced, propagate, rhs
from .spectral import (SpectralDecomposition, decompose, energy_expectation, even_probabilities,
                       hermite_fn, overlap_quadrature, pn_closed_even)
from .classical import (ClassicalSolution, classical_evolve, classical_trajectory, complex_solution,
                        floquet_growth, monodromy, pr_condition, riccati_oracle)
from .analysis import (FitResult, SweepResult, SweepRow, detect_transition, fit_exponential,
                       fit_powerlaw, relative_spread, sweep, transition_width)

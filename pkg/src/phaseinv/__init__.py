"""Reconstruction of compactly supported radial potentials from fixed-energy phase shifts.

The pipeline maps the radial problem to a half-line Sturm-Liouville problem,
recovers its spectral data from the phase shifts through a moment problem,
and rebuilds the potential with the Gel'fand-Levitan equation.
"""

from .bound_states import BoundStateSet, ExpWellParams, assess, bound_state_positions, count_bound_states_h0
from .config import InversionConfig
from .errors import (ConvergenceError, DegenerateNodesError, DomainError, IndeterminateLambdaError,
                     InversionError, NonUniqueSolutionError, NumericalError, ParseError, PoleError,
                     SearchFailedError, SingularMomentError)
from .estimator import PhaseShiftInversion
from .forward import PhaseShiftSet, RadialPotential, constant_well_phases, solve_phase_shifts
from .gelfand_levitan import GLGrid, ReconstructionReport, reconstruct, solve_gl
from .io import combine_spin_phases, parse_phase_file, write_phase_file
from .liouville import PotentialCurve, TransformParams
from .moment_solver import SpectralExpansion, solve_multi_bs, solve_one_bs, solve_zero_bs
from .spectral import MomentSet, moments
from .tuning import TuneGrid, grid_search, smoothness

__version__ = "0.1.0"

__all__ = [
    "BoundStateSet", "ConvergenceError", "DegenerateNodesError", "DomainError", "ExpWellParams", "GLGrid",
    "IndeterminateLambdaError", "InversionConfig", "InversionError", "MomentSet", "NonUniqueSolutionError",
    "NumericalError", "ParseError", "PhaseShiftInversion", "PhaseShiftSet", "PoleError", "PotentialCurve",
    "RadialPotential", "ReconstructionReport", "SearchFailedError", "SingularMomentError", "SpectralExpansion",
    "TransformParams", "TuneGrid", "assess", "bound_state_positions", "combine_spin_phases",
    "constant_well_phases", "count_bound_states_h0", "grid_search", "moments", "parse_phase_file",
    "reconstruct", "smoothness", "solve_gl", "solve_multi_bs", "solve_one_bs", "solve_phase_shifts",
    "solve_zero_bs", "write_phase_file",
]

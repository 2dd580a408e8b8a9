"""Probe-qubit resonance simulator.

A probe qubit of frequency omega coupled to a register drives the register
from a reference state into the system eigenstate whose transition frequency
matches omega. This package simulates that dynamics (full space, reduced
arrowhead model, product formula), the degenerate three-level analysis and
the frequency-scan spectroscopy built on it.
"""

from ._kernels import BACKEND
from .analytic3 import ThreeLevelParams, cubic_roots, h3, p_analytic, p_numeric3
from .errors import (
    DegenerateRootsError,
    NumericError,
    ProbeResonanceError,
    SizeError,
    StrongCouplingWarning,
    UnreachableTargetError,
    UnsupportedRepresentationError,
    ValidationError,
)
from .evolve import EvolutionResult, evolve, evolve_series, evolve_trotter, sample_probe
from .experiments import AlphaSearchResult, alpha_search, figure_dataset, table1
from .hamiltonian import (
    ArrowheadHamiltonian,
    ExplicitSpec,
    ProbeConfig,
    SpectralSpec,
    build_degenerate,
    build_full,
    build_reduced,
    overlaps_from_explicit,
)
from .perturb import OffResonantTransition, first_order_prob
from .qcore import HermitianOperator, StateVector, eig_hermitian, propagate_exact, tensor
from .scan import ScanConfig, ScanResult, detect_peaks, run_scan

__version__ = "0.1.0"

"""Toolbox for ordering, synthesis and coherence constraints of small thermal
systems: majorisation and thermo-majorisation checks, Gibbs-stochastic matrix
construction, generalized free energies, single-shot work quantities and
covariant-channel coherence bounds."""

from .core import (
    DensityMatrix,
    EnergySpectrum,
    GibbsContext,
    PLCurve,
    ProbVec,
    StochasticMatrix,
    gibbs_vector,
    population_of,
    thermal_state,
)

__version__ = "0.1.0"

__all__ = [
    "DensityMatrix",
    "EnergySpectrum",
    "GibbsContext",
    "PLCurve",
    "ProbVec",
    "StochasticMatrix",
    "gibbs_vector",
    "population_of",
    "thermal_state",
    "__version__",
]

"""atomlight: dipole-coupled atoms and the electromagnetic vacuum.

Numerical library for hydrogenic dipole matrix elements and form factors,
spontaneous-emission rates corrected for a quantum-delocalized center of
mass (recoil and Doppler through the magnetic coupling of the moving
dipole), electromagnetic vacuum Wightman tensors, Gaussian-switched vacuum
excitation probabilities, and Lorentz-covariance checks of the dipole
detector model.  Natural units hbar = c = eps0 = 1, energies in eV.
"""

__version__ = "0.1.0"

from .errors import DomainError, NumericalError
from .units import (
    AtomParameters,
    ChargeConvention,
    UnitSystem,
    seconds_inverse_from_ev,
    standard_hydrogen,
)
from .hydrogen import QuantumNumbers, dipole_matrix_element, form_factor, wavefunction
from .polarization import BoostParameters
from .quadrature import MonteCarloSpec, QuadratureResult
from .rates import (
    GaussianMomentumDistribution,
    emission_rate_closed,
    emission_rate_numeric,
    self_energy_shift,
)
from .wightman import SpacetimePointPair, boost_wightman, wightman_closed, wightman_momentum
from .vep import (
    SwitchingFunction,
    VepResult,
    excitation_probability_boosted,
    excitation_probability_closed,
    excitation_probability_pipeline,
)

__all__ = [
    "__version__",
    "DomainError",
    "NumericalError",
    "AtomParameters",
    "ChargeConvention",
    "UnitSystem",
    "seconds_inverse_from_ev",
    "standard_hydrogen",
    "QuantumNumbers",
    "dipole_matrix_element",
    "form_factor",
    "wavefunction",
    "BoostParameters",
    "MonteCarloSpec",
    "QuadratureResult",
    "GaussianMomentumDistribution",
    "emission_rate_closed",
    "emission_rate_numeric",
    "self_energy_shift",
    "SpacetimePointPair",
    "boost_wightman",
    "wightman_closed",
    "wightman_momentum",
    "SwitchingFunction",
    "VepResult",
    "excitation_probability_boosted",
    "excitation_probability_closed",
    "excitation_probability_pipeline",
]

"""Photon-recycled displacement-assisted SU(1,1) interferometer: closed forms and oracles."""

from .coeffs import (
    BogoliubovCoefficients, InterferometerConfig, RecyclingConstants, bogoliubov_coefficients,
    recycling_constants, stability_margin, verify_commutator_identities,
)
from .detection import (
    Model, MomentPair, Scheme, SensitivityReport, dphi_derivative, hd_moments_conventional,
    hd_moments_pr, phase_sensitivity, sid_moments_conventional, sid_moments_pr,
)
from .resources import (
    InternalModeDecomposition, ResourceReport, internal_mode_decomposition, qcrb, qfi,
    resource_report, snl, total_photon_number,
)

__version__ = "0.1.0"

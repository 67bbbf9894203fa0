"""Independent verification engines: Gaussian recycling chain and truncated Fock space."""

from .chain import ChainResult, iterate_recycling
from .fock import FockResult, TwoModeFock, fock_oracle_conventional
from .gaussian import (
    GaussianState, displace, loss_channel, number_moments, phase_shift, quadrature_moments,
    squeeze, two_mode_squeeze, vacuum_state,
)

__all__ = [
    "ChainResult", "FockResult", "GaussianState", "TwoModeFock", "displace",
    "fock_oracle_conventional", "iterate_recycling", "loss_channel", "number_moments",
    "phase_shift", "quadrature_moments", "squeeze", "two_mode_squeeze", "vacuum_state",
]

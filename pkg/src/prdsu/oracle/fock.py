"""Brute-force two-mode Fock-space simulation of the conventional interferometer.

Used only as an independent check of the Gaussian closed forms for small gains,
squeezing and displacement.  Operators are truncated at ``cutoff`` photons per mode
and every element is applied as a sparse matrix exponential.
"""

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import expm_multiply
from scipy.special import gammaln

from ..detection import MomentPair

TAIL_LEVELS = 4
TAIL_TOLERANCE = 1e-8


@dataclass(frozen=True)
class FockResult:
    number: MomentPair
    quadrature: MomentPair
    tail_mass: float
    cutoff: int

    @property
    def trusted(self):
        return self.tail_mass <= TAIL_TOLERANCE


def squeezed_vacuum_amplitudes(r, delta, cutoff):
    """Fock amplitudes of ``S(xi)|0>`` with ``xi = r e^{i delta}``."""
    psi = np.zeros(cutoff, dtype=complex)
    n = np.arange(cutoff // 2 + cutoff % 2)
    k = 2 * n
    k = k[k < cutoff]
    n = k // 2
    t = np.tanh(r)
    with np.errstate(divide="ignore"):
        log_mag = 0.5 * gammaln(k + 1) - n * np.log(2.0) - gammaln(n + 1) + n * np.log(t) if t > 0 \
            else np.where(n == 0, 0.0, -np.inf)
    psi[k] = np.exp(log_mag) * (-np.exp(1j * delta)) ** n / np.sqrt(np.cosh(r))
    return psi


class TwoModeFock:
    """State vector on modes ``a`` (first tensor factor) and ``b``."""

    def __init__(self, cutoff, psi_a=None, psi_b=None):
        self.cutoff = cutoff
        ann = sp.diags(np.sqrt(np.arange(1, cutoff)), 1, format="csr")
        eye = sp.identity(cutoff, format="csr")
        self.a = sp.kron(ann, eye, format="csr")
        self.b = sp.kron(eye, ann, format="csr")
        self.n_a = np.repeat(np.arange(cutoff), cutoff)
        self.n_b = np.tile(np.arange(cutoff), cutoff)
        vac = np.zeros(cutoff, dtype=complex)
        vac[0] = 1.0
        psi_a = vac if psi_a is None else psi_a
        psi_b = vac if psi_b is None else psi_b
        self.psi = np.kron(psi_a, psi_b)

    def _apply(self, generator):
        self.psi = expm_multiply(generator, self.psi)

    def two_mode_squeeze(self, g, eta):
        s = g * np.exp(1j * eta)
        ab = self.a @ self.b
        self._apply(-s * ab.conj().T + np.conj(s) * ab)

    def displace(self, mode, gamma):
        op = self.a if mode == "a" else self.b
        self._apply(gamma * op.conj().T - np.conj(gamma) * op)

    def phase(self, phi):
        self.psi = np.exp(1j * phi * self.n_b) * self.psi

    def number_moments(self, mode="b"):
        n = self.n_b if mode == "b" else self.n_a
        p = np.abs(self.psi) ** 2
        mean = float(p @ n)
        var = float(p @ (n * n.astype(float))) - mean ** 2
        return MomentPair(mean, float(np.sqrt(max(var, 0.0))))

    def quadrature_moments(self, mode="b"):
        op = self.b if mode == "b" else self.a
        x = (op + op.conj().T) / np.sqrt(2.0)
        xpsi = x @ self.psi
        mean = float(np.real(np.vdot(self.psi, xpsi)))
        second = float(np.real(np.vdot(xpsi, xpsi)))
        return MomentPair(mean, float(np.sqrt(max(second - mean ** 2, 0.0))))

    def tail_mass(self, levels=TAIL_LEVELS):
        edge = self.cutoff - levels
        p = np.abs(self.psi) ** 2
        return float(p[(self.n_a >= edge) | (self.n_b >= edge)].sum())


def fock_oracle_conventional(cfg, phi, cutoff=40):
    """Port-b moments of the conventional interferometer by direct state evolution."""
    if not 2 <= cutoff <= 60:
        raise ValueError("cutoff must lie in [2, 60]")
    sim = TwoModeFock(cutoff, psi_b=squeezed_vacuum_amplitudes(cfg.r, cfg.delta_xi, cutoff))
    sim.two_mode_squeeze(cfg.g1, cfg.eta1)
    sim.displace("a", complex(cfg.gamma))
    sim.displace("b", complex(cfg.gamma))
    sim.phase(phi)
    sim.two_mode_squeeze(cfg.g2, cfg.eta2)
    return FockResult(sim.number_moments("b"), sim.quadrature_moments("b"), sim.tail_mass(), cutoff)

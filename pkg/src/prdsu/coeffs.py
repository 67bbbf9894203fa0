"""Bogoliubov and recycling coefficients of the (photon-recycled) DSU(1,1) interferometer.

Conventions: the OPA maps ``a -> cosh(g) a - e^{i eta} sinh(g) b^dag``, the phase
shifter maps ``b -> e^{i phi} b`` and the displacement adds ``gamma`` to each arm.
Every function accepts ``phi`` as a float, a numpy array or a :class:`~prdsu.dual.Dual`;
configuration fields may also be arrays, in which case everything broadcasts.
"""

from dataclasses import dataclass, replace

import numpy as np

from .dual import abs2, conj, expi

#: ``|A| >= 1 - STABILITY_EPS`` is treated as non-convergent.
STABILITY_EPS = 1e-9


@dataclass(frozen=True)
class InterferometerConfig:
    """Physical parameters of the interferometer.

    ``gamma_mag`` and ``delta_gamma`` give the displacement ``gamma = |gamma| e^{i delta_gamma}``;
    ``r`` and ``delta_xi`` the squeezed vacuum injected into port b.  ``T`` and ``theta``
    describe the recycling arm (``T = 0`` is the conventional interferometer).
    """

    g1: float = 1.0
    g2: float = 1.0
    eta1: float = 0.0
    eta2: float = np.pi
    r: float = 0.0
    delta_xi: float = 0.0
    gamma_mag: float = 0.0
    delta_gamma: float = 0.0
    T: float = 0.0
    theta: float = 0.0

    def __post_init__(self):
        for name in ("g1", "g2", "r", "gamma_mag"):
            v = np.asarray(getattr(self, name), dtype=float)
            if np.any(~np.isfinite(v)) or np.any(v < 0):
                raise ValueError(f"{name} must be finite and >= 0, got {getattr(self, name)!r}")
        T = np.asarray(self.T, dtype=float)
        if np.any(~np.isfinite(T)) or np.any((T < 0) | (T > 1)):
            raise ValueError(f"T must lie in [0, 1], got {self.T!r}")
        for name in ("eta1", "eta2", "delta_xi", "delta_gamma", "theta"):
            if np.any(~np.isfinite(np.asarray(getattr(self, name), dtype=float))):
                raise ValueError(f"{name} must be finite")

    @classmethod
    def balanced(cls, g=1.0, r=0.0, gamma_mag=0.0, T=0.0, theta=0.0):
        """Balanced configuration: ``g1 = g2 = g``, ``eta1 = 0``, ``eta2 = pi``, real ``xi`` and ``gamma``."""
        return cls(g1=g, g2=g, eta1=0.0, eta2=np.pi, r=r, delta_xi=0.0,
                   gamma_mag=gamma_mag, delta_gamma=0.0, T=T, theta=theta)

    @property
    def gamma(self):
        return self.gamma_mag * np.exp(1j * np.asarray(self.delta_gamma, dtype=float))

    @property
    def is_balanced(self):
        return bool(np.all(self.g1 == self.g2) and np.all(np.isclose(
            np.mod(np.asarray(self.eta2) - np.asarray(self.eta1), 2 * np.pi), np.pi))
            and np.all(self.delta_xi == 0) and np.all(self.delta_gamma == 0))

    def replace(self, **changes):
        return replace(self, **changes)

    def conventional(self):
        """The same interferometer with the recycling arm removed."""
        return replace(self, T=0.0)


@dataclass(frozen=True)
class BogoliubovCoefficients:
    Y: complex
    Z: complex
    W1: complex
    W2: complex


@dataclass(frozen=True)
class RecyclingConstants:
    C1: complex
    C2: complex
    C3: complex
    A: complex
    stable: bool


def bogoliubov_coefficients(cfg, phi):
    """Coefficients of ``a_out = W1 + Y a_in - Z b_in^dag``, ``b_out = W2 + e^{i phi}(Y b_in - Z a_in^dag)``."""
    c1, s1 = np.cosh(cfg.g1), np.sinh(cfg.g1)
    c2, s2 = np.cosh(cfg.g2), np.sinh(cfg.g2)
    e_phi = expi(phi)
    e_minus = 1.0 / e_phi
    gamma = cfg.gamma
    Y = c1 * c2 + (np.exp(1j * (np.asarray(cfg.eta2) - cfg.eta1)) * s1 * s2) * e_minus
    Z = np.exp(1j * np.asarray(cfg.eta1)) * s1 * c2 + (np.exp(1j * np.asarray(cfg.eta2)) * c1 * s2) * e_minus
    W1 = gamma * c2 - (np.conj(gamma) * np.exp(1j * np.asarray(cfg.eta2)) * s2) * e_minus
    W2 = (gamma * c2) * e_phi - np.conj(gamma) * np.exp(1j * np.asarray(cfg.eta2)) * s2
    return BogoliubovCoefficients(Y, Z, W1, W2)


def _loop_gain(cfg, Y):
    return Y * (np.sqrt(cfg.T) * np.exp(1j * np.asarray(cfg.theta, dtype=float)))


def _is_stable(A):
    return np.abs(A.val if hasattr(A, "val") else A) < 1.0 - STABILITY_EPS


def recycling_constants(cfg, phi, bog=None):
    """Steady-state constants ``C1, C2, C3`` and loop gain ``A = Y sqrt(T) e^{i theta}``.

    ``C1`` is evaluated as the single fraction ``e^{-i theta} / (e^{-i theta} - Y sqrt(T))``.
    Values are returned even when the loop diverges; ``stable`` flags that case.
    """
    if bog is None:
        bog = bogoliubov_coefficients(cfg, phi)
    Y, Z, W1, W2 = bog.Y, bog.Z, bog.W1, bog.W2
    sqrt_T = np.sqrt(cfg.T)
    e_th = np.exp(-1j * np.asarray(cfg.theta, dtype=float))
    denom = e_th - Y * sqrt_T
    C1 = e_th / denom
    C2 = conj(W2) - (conj(Z) * W1) * (sqrt_T / expi(phi)) / denom
    C3 = conj(Y) + (abs2(Z) * sqrt_T) / denom
    A = _loop_gain(cfg, Y)
    return RecyclingConstants(C1, C2, C3, A, _is_stable(A))


def stability_margin(cfg, phi):
    """``1 - |A|``; positive when the recycling series converges."""
    Y = bogoliubov_coefficients(cfg, phi).Y
    return 1.0 - np.abs(_loop_gain(cfg, Y))


def verify_commutator_identities(cfg, phi):
    """Residuals ``(||Y|^2 - |Z|^2 - 1|, ||C3|^2 - (1-T)|C1|^2|Z|^2 - 1|)``."""
    bog = bogoliubov_coefficients(cfg, phi)
    rc = recycling_constants(cfg, phi, bog)
    r1 = np.abs(abs2(bog.Y) - abs2(bog.Z) - 1.0)
    r2 = np.abs(abs2(rc.C3) - (1.0 - cfg.T) * abs2(rc.C1) * abs2(bog.Z) - 1.0)
    return r1, r2

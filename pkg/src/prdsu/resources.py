"""Photon-number resources and the quantum Cramér-Rao bound.

The internal modes ``a1``, ``b1`` (just after the first OPA and the displacements)
are written as affine forms over the independent inputs: the squeezed vacuum
``b_in`` and the recycling-loss vacuum ``v``.  A single Wick/Isserlis engine
(:func:`number_moments`) then gives photon-number means and variances, which
feed ``N_total``, the SNL and the QFI.
"""

from dataclasses import dataclass

import numpy as np

from .coeffs import bogoliubov_coefficients, recycling_constants
from .errors import ComputationalInconsistencyError, NonConvergentRegimeError, UndefinedBoundError


@dataclass(frozen=True)
class AffineMode:
    """``alpha b + beta b^dag + mu v + nu v^dag + c``."""

    alpha: complex
    beta: complex
    mu: complex
    nu: complex
    c: complex

    @property
    def commutator(self):
        """``[o, o^dag]``; equal to 1 only for a properly normalised bosonic mode."""
        return (np.abs(self.alpha) ** 2 - np.abs(self.beta) ** 2
                + np.abs(self.mu) ** 2 - np.abs(self.nu) ** 2)


@dataclass(frozen=True)
class InternalModeDecomposition:
    a1: AffineMode
    b1: AffineMode

    @property
    def commutator_residuals(self):
        return np.abs(self.a1.commutator - 1.0), np.abs(self.b1.commutator - 1.0)


@dataclass(frozen=True)
class ResourceReport:
    n_total: float
    snl: float
    fisher: float
    qcrb: float
    trials: int


def _input_pair_moments(r, delta_xi):
    """Ordered two-point functions ``<e_i e_j>`` over ``e = (b, b^dag, v, v^dag)``."""
    ch, sh = np.cosh(r), np.sinh(r)
    m_bb = -np.exp(1j * np.asarray(delta_xi, dtype=float)) * sh * ch
    zero = np.zeros_like(m_bb)
    one = np.ones_like(m_bb)
    return [
        [m_bb, ch ** 2 + zero, zero, zero],
        [sh ** 2 + zero, np.conj(m_bb), zero, zero],
        [zero, zero, zero, one],
        [zero, zero, zero, zero],
    ]


def _pair(G, k, l):
    return sum(k[i] * G[i][j] * l[j] for i in range(4) for j in range(4))


def number_moments(form, r, delta_xi=0.0):
    """Mean and variance of ``o^dag o`` for an affine form over Gaussian inputs.

    Uses Isserlis' theorem for ordered products; no assumption ``[o, o^dag] = 1``.
    """
    G = _input_pair_moments(r, delta_xi)
    k = (form.alpha, form.beta, form.mu, form.nu)
    k_dag = tuple(np.conj(x) for x in (form.beta, form.alpha, form.nu, form.mu))
    N = np.real(_pair(G, k_dag, k))      # <do^dag do>
    P = np.real(_pair(G, k, k_dag))      # <do do^dag>
    M = _pair(G, k, k)                   # <do do>
    c = form.c
    c2 = np.abs(c) ** 2
    mean = c2 + N
    var = N * P + np.abs(M) ** 2 + c2 * (N + P) + 2 * np.real(np.conj(c) ** 2 * M)
    return mean, var


def _decompose(cfg, phi):
    bog = bogoliubov_coefficients(cfg, phi)
    rc = recycling_constants(cfg, phi, bog)
    c1, s1 = np.cosh(cfg.g1), np.sinh(cfg.g1)
    e1 = np.exp(1j * np.asarray(cfg.eta1, dtype=float))
    loop = np.sqrt(cfg.T) * np.exp(1j * np.asarray(cfg.theta, dtype=float)) * rc.C1
    # steady-state recycled input a_in = ab b^dag + av v + a0
    ab = -loop * bog.Z
    av = np.sqrt(1.0 - cfg.T) * rc.C1
    a0 = loop * bog.W1
    gamma = cfg.gamma
    zero = np.zeros_like(ab)
    a1 = AffineMode(zero, c1 * ab - e1 * s1, c1 * av, zero, c1 * a0 + gamma)
    b1 = AffineMode(c1 - e1 * s1 * np.conj(ab), zero, zero,
                    -e1 * s1 * np.conj(av), gamma - e1 * s1 * np.conj(a0))
    return InternalModeDecomposition(a1, b1), rc.stable


def _require_stable(stable):
    if not np.all(stable):
        raise NonConvergentRegimeError(
            "recycling loop gain |A| >= 1 - eps: the steady state does not exist")


def internal_mode_decomposition(cfg, phi):
    """Steady-state ``a1``, ``b1`` as affine forms over ``(b_in, v)``."""
    dec, stable = _decompose(cfg, phi)
    _require_stable(stable)
    return dec


def _n_total_printed(cfg, phi):
    bog = bogoliubov_coefficients(cfg, phi)
    rc = recycling_constants(cfg, phi, bog)
    g, r, T = cfg.g1, cfg.r, cfg.T
    Y, Z, W1 = bog.Y, bog.Z, bog.W1
    sT = np.sqrt(T)
    e_th = np.exp(1j * np.asarray(cfg.theta, dtype=float))
    sg2 = np.sinh(g) ** 2
    c2g = np.cosh(2 * g)
    abs_Z2 = np.abs(Z) ** 2
    return (2 * cfg.gamma_mag ** 2
            + T * np.abs(rc.C1) ** 2 * (c2g * (np.abs(W1) ** 2 + abs_Z2 * np.cosh(r) ** 2) - abs_Z2 * sg2)
            + (sg2 + c2g * np.sinh(r) ** 2)
            + sg2 * (1 - T) * (1 + np.abs(Y) ** 2 + 2 * sT * np.real(Y * e_th))
            + sT * np.sinh(2 * g) * np.cosh(2 * r) * np.real(Z * rc.C1 * e_th)
            + 2 * cfg.gamma_mag * sT * (np.cosh(g) - np.sinh(g)) * np.real(rc.C1 * W1 * e_th))


def _n_total_oracle(cfg, phi):
    dec, stable = _decompose(cfg, phi)
    na, _ = number_moments(dec.a1, cfg.r, cfg.delta_xi)
    nb, _ = number_moments(dec.b1, cfg.r, cfg.delta_xi)
    return na + nb, stable


def total_photon_number(cfg, phi, method="oracle"):
    """Mean photon number in both arms just after the displacements.

    ``method="oracle"`` uses the Gaussian moments of the internal-mode decomposition;
    ``method="paper_formula"`` evaluates the printed closed form (balanced gain ``g1``),
    whose value is returned unclamped even if negative.
    """
    if method == "oracle":
        n, stable = _n_total_oracle(cfg, phi)
    elif method == "paper_formula":
        n, stable = _n_total_printed(cfg, phi), recycling_constants(cfg, phi).stable
    else:
        raise ValueError(f"unknown method {method!r}")
    _require_stable(stable)
    return n if np.ndim(n) else float(n)


def snl(cfg, phi, method="oracle"):
    """Shot-noise limit ``1 / sqrt(N_total)``."""
    n = np.asarray(total_photon_number(cfg, phi, method=method))
    if np.any(n <= 0):
        raise UndefinedBoundError("N_total = 0: shot-noise limit is undefined")
    out = 1.0 / np.sqrt(n)
    return out if out.ndim else float(out)


def _fisher(cfg, phi):
    dec, stable = _decompose(cfg, phi)
    _, var = number_moments(dec.b1, cfg.r, cfg.delta_xi)
    return 4.0 * var, stable


def qfi(cfg, phi):
    """Pure-state QFI ``4 Var(b1^dag b1)`` of the phase generator on arm b."""
    F, stable = _fisher(cfg, phi)
    _require_stable(stable)
    F = np.asarray(F, dtype=float)
    if np.any(F < -1e-9):
        raise ComputationalInconsistencyError(f"negative QFI {F.min():.3e}")
    F = np.maximum(F, 0.0)
    return F if F.ndim else float(F)


def qcrb(cfg, phi, trials=1):
    """``1 / sqrt(trials * F_Q)``."""
    if int(trials) != trials or trials < 1:
        raise ValueError("trials must be a positive integer")
    F = np.asarray(qfi(cfg, phi))
    if np.any(F == 0):
        raise UndefinedBoundError("F_Q = 0: the QCRB is unbounded")
    out = 1.0 / np.sqrt(trials * F)
    return out if out.ndim else float(out)


def resource_report(cfg, phi, trials=1, method="oracle"):
    n = total_photon_number(cfg, phi, method=method)
    F = qfi(cfg, phi)
    return ResourceReport(n_total=n, snl=snl(cfg, phi, method=method), fisher=F,
                          qcrb=qcrb(cfg, phi, trials), trials=int(trials))

"""Mean-vector / covariance-matrix representation of Gaussian bosonic modes.

Quadratures are ordered ``x1, p1, x2, p2, ...`` with ``hbar = 1`` so the vacuum has
covariance ``I/2`` and ``X = (a + a^dag)/sqrt(2)`` is read directly off ``x``.

Besides ``mean`` and the symmetrised covariance ``cov``, a state carries
``omega``, the commutator matrix ``[R_i, R_j] = i omega_ij``.  For ordinary states
``omega`` is the standard symplectic form.  The recycling chain also needs
bookkeeping modes that are *references* to input operators (a copy of the squeezed
input re-injected every round); those modes need not commute with the others,
and ``omega`` records that exactly so photon-number moments stay correct.
"""

from dataclasses import dataclass

import numpy as np
from scipy.linalg import block_diag

from ..detection import MomentPair

_J = np.array([[0.0, 1.0], [-1.0, 0.0]])


def symplectic_form(n):
    return block_diag(*([_J] * n))


@dataclass(frozen=True, eq=False)
class GaussianState:
    mean: np.ndarray
    cov: np.ndarray
    omega: np.ndarray

    @property
    def mode_count(self):
        return self.mean.shape[0] // 2

    def block(self, mode):
        i = 2 * mode
        return self.mean[i:i + 2], self.cov[i:i + 2, i:i + 2], self.omega[i, i + 1]


def vacuum_state(n):
    return GaussianState(np.zeros(2 * n), 0.5 * np.eye(2 * n), symplectic_form(n))


def _check_mode(state, *modes):
    for m in modes:
        if not 0 <= m < state.mode_count:
            raise IndexError(f"mode {m} out of range for {state.mode_count}-mode state")
    if len(set(modes)) != len(modes):
        raise ValueError("modes must be distinct")


def _embed(state, modes, S):
    L = np.eye(2 * state.mode_count)
    idx = np.concatenate([[2 * m, 2 * m + 1] for m in modes])
    L[np.ix_(idx, idx)] = S
    return L


def apply_linear(state, L, shift=None, noise_cov=None, noise_omega=None):
    """``R -> L R + shift + noise`` with noise independent of the state."""
    mean = L @ state.mean
    if shift is not None:
        mean = mean + shift
    cov = L @ state.cov @ L.T
    omega = L @ state.omega @ L.T
    if noise_cov is not None:
        cov = cov + noise_cov
        omega = omega + noise_omega
    return GaussianState(mean, 0.5 * (cov + cov.T), 0.5 * (omega - omega.T))


def squeeze(state, mode, r, delta=0.0):
    """Single-mode squeezer ``b -> cosh(r) b - e^{i delta} sinh(r) b^dag``."""
    _check_mode(state, mode)
    c, s = np.cosh(r), np.sinh(r)
    S = np.array([[c - s * np.cos(delta), -s * np.sin(delta)],
                  [-s * np.sin(delta), c + s * np.cos(delta)]])
    return apply_linear(state, _embed(state, [mode], S))


def two_mode_squeeze(state, mode_i, mode_j, g, eta):
    """OPA ``exp(-s a^dag b^dag + s^* a b)`` with ``s = g e^{i eta}``.

    Heisenberg action: ``a -> cosh(g) a - e^{i eta} sinh(g) b^dag`` and likewise for b.
    """
    _check_mode(state, mode_i, mode_j)
    c, s = np.cosh(g), np.sinh(g)
    R = np.array([[np.cos(eta), np.sin(eta)], [np.sin(eta), -np.cos(eta)]])
    S = np.block([[c * np.eye(2), -s * R], [-s * R, c * np.eye(2)]])
    return apply_linear(state, _embed(state, [mode_i, mode_j], S))


def displace(state, mode, gamma):
    _check_mode(state, mode)
    shift = np.zeros(2 * state.mode_count)
    shift[2 * mode:2 * mode + 2] = np.sqrt(2.0) * np.array([np.real(gamma), np.imag(gamma)])
    return GaussianState(state.mean + shift, state.cov, state.omega)


def phase_shift(state, mode, phi):
    """``exp(i phi b^dag b)``: ``b -> e^{i phi} b``."""
    _check_mode(state, mode)
    c, s = np.cos(phi), np.sin(phi)
    return apply_linear(state, _embed(state, [mode], np.array([[c, -s], [s, c]])))


def loss_channel(state, mode, T):
    """Beam splitter of transmission ``T`` with a fresh vacuum, ancilla traced out."""
    _check_mode(state, mode)
    if not 0.0 <= T <= 1.0:
        raise ValueError("T must lie in [0, 1]")
    n = 2 * state.mode_count
    L = _embed(state, [mode], np.sqrt(T) * np.eye(2))
    noise_cov = np.zeros((n, n))
    noise_omega = np.zeros((n, n))
    sl = slice(2 * mode, 2 * mode + 2)
    noise_cov[sl, sl] = 0.5 * (1.0 - T) * np.eye(2)
    noise_omega[sl, sl] = (1.0 - T) * _J
    return apply_linear(state, L, noise_cov=noise_cov, noise_omega=noise_omega)


def copy_mode(state, src, dst):
    """Make mode ``dst`` the same operator as mode ``src`` (bookkeeping only)."""
    _check_mode(state, src, dst)
    L = np.eye(2 * state.mode_count)
    L[2 * dst:2 * dst + 2, :] = 0.0
    L[2 * dst, 2 * src] = L[2 * dst + 1, 2 * src + 1] = 1.0
    return apply_linear(state, L)


def mix_with_reference(state, mode, ref, T):
    """``a -> sqrt(T) a + sqrt(1-T) v_ref`` where ``v_ref`` keeps its identity."""
    _check_mode(state, mode, ref)
    L = np.eye(2 * state.mode_count)
    sl = slice(2 * mode, 2 * mode + 2)
    L[sl, sl] = np.sqrt(T) * np.eye(2)
    L[2 * mode, 2 * ref] = L[2 * mode + 1, 2 * ref + 1] = np.sqrt(1.0 - T)
    return apply_linear(state, L)


def number_moments(state, mode):
    """Mean and variance of ``b^dag b`` for one mode.

    Isserlis with ``N = <db^dag db>``, ``M = <db db>`` and ``kappa = [b, b^dag]``:
    ``Var = N (N + kappa) + |M|^2 + |c|^2 (2N + kappa) + 2 Re(c^*2 M)``.
    """
    d, V, kappa = state.block(mode)
    N = 0.5 * (V[0, 0] + V[1, 1] - kappa)
    M = 0.5 * (V[0, 0] - V[1, 1] + 2j * V[0, 1])
    c = (d[0] + 1j * d[1]) / np.sqrt(2.0)
    c2 = abs(c) ** 2
    var = N * (N + kappa) + abs(M) ** 2 + c2 * (2 * N + kappa) + 2 * np.real(np.conj(c) ** 2 * M)
    return MomentPair(float(c2 + N), float(np.sqrt(max(var, 0.0))))


def quadrature_moments(state, mode):
    """Mean and standard deviation of ``x = (b + b^dag)/sqrt(2)``."""
    d, V, _ = state.block(mode)
    return MomentPair(float(d[0]), float(np.sqrt(V[0, 0])))


def uncertainty_min_eigenvalue(state):
    """Smallest eigenvalue of ``cov + (i/2) omega``; ``>= 0`` for a physical state."""
    return float(np.linalg.eigvalsh(state.cov + 0.5j * state.omega).min())


def purity_determinant(state, modes=None):
    """``det(2 cov)`` of the reduced state on ``modes``; 1 for pure states."""
    if modes is None:
        modes = range(state.mode_count)
    idx = np.concatenate([[2 * m, 2 * m + 1] for m in modes])
    return float(np.linalg.det(2.0 * state.cov[np.ix_(idx, idx)]))

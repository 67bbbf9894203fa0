"""Output-port moments and error-propagation phase sensitivity for port b.

Two observables are supported: the photon number ``N_b = b_out^dag b_out`` (single
intensity detection, SID) and the quadrature ``X = (b_out + b_out^dag)/sqrt(2)``
(homodyne detection, HD).  Each is available for the photon-recycled interferometer
(``Model.PR``) and for the plain DSU(1,1) interferometer (``Model.CONVENTIONAL``).

The photon-number variances default to the exact Gaussian result.  The printed
closed forms omit a ``cosh(r)^2`` factor on the term proportional to
``|C1|^2 |Z|^2 (1-T) |C3|^2`` (``|Z|^2 |Y|^2`` for the conventional case); pass
``paper_verbatim=True`` to evaluate them as printed.
"""

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .coeffs import bogoliubov_coefficients, recycling_constants
from .dual import Dual, abs2, conj, derivative, expi, real
from .errors import ComputationalInconsistencyError

RADICAND_CLAMP = 1e-10
ZERO_DERIVATIVE = 1e-300
FD_STEP = 1e-5


class Scheme(str, Enum):
    SID = "sid"
    HD = "hd"


class Model(str, Enum):
    PR = "pr"
    CONVENTIONAL = "conventional"


@dataclass(frozen=True)
class MomentPair:
    mean: float
    std_dev: float
    clamped: int = 0

    @property
    def variance(self):
        return self.std_dev ** 2


@dataclass(frozen=True)
class SensitivityReport:
    delta_phi: float
    scheme: Scheme
    model: Model
    derivative: float
    derivative_method: str
    stable: bool
    std_dev: float = float("nan")


def _clamped_sqrt(var):
    var = np.asarray(var, dtype=float)
    if np.any(var < -RADICAND_CLAMP):
        raise ComputationalInconsistencyError(
            f"negative variance {var.min():.3e}; coefficient formulas are inconsistent")
    neg = var < 0
    n_clamped = int(np.count_nonzero(neg))
    if n_clamped:
        var = np.where(neg, 0.0, var)
    out = np.sqrt(var)
    return (out if out.ndim else float(out)), n_clamped


def _squeeze_phase(cfg):
    return np.exp(1j * np.asarray(cfg.delta_xi, dtype=float))


# Mean formulas are written so that ``phi`` may be a Dual; only e^{±i phi} carries it.

def _sid_mean_pr(cfg, phi):
    bog = bogoliubov_coefficients(cfg, phi)
    rc = recycling_constants(cfg, phi, bog)
    loss = abs2(rc.C1) * abs2(bog.Z) * (1.0 - cfg.T)
    return abs2(rc.C2) + abs2(rc.C3) * np.sinh(cfg.r) ** 2 + loss


def _hd_mean_pr(cfg, phi):
    rc = recycling_constants(cfg, phi)
    return np.sqrt(2.0) * real(rc.C2)


def _sid_mean_conv(cfg, phi):
    bog = bogoliubov_coefficients(cfg, phi)
    return abs2(bog.W2) + abs2(bog.Y) * np.sinh(cfg.r) ** 2 + abs2(bog.Z)


def _hd_mean_conv(cfg, phi):
    bog = bogoliubov_coefficients(cfg, phi)
    return np.sqrt(2.0) * real(bog.W2)


_MEANS = {
    (Scheme.SID, Model.PR): _sid_mean_pr,
    (Scheme.HD, Model.PR): _hd_mean_pr,
    (Scheme.SID, Model.CONVENTIONAL): _sid_mean_conv,
    (Scheme.HD, Model.CONVENTIONAL): _hd_mean_conv,
}


def _sid_variance(mean_amp, u, loss, cfg, phi, paper_verbatim):
    # b_out = mean_amp + u b_in + w v^dag with |w|^2 = loss and b_in squeezed vacuum
    ch, sh = np.cosh(cfg.r), np.sinh(cfg.r)
    u2 = abs2(u)
    cross = np.sinh(2 * cfg.r) * np.real(_squeeze_phase(cfg) * np.conj(mean_amp) ** 2 * u ** 2)
    loss_weight = 1.0 if paper_verbatim else ch ** 2
    return (abs2(mean_amp) * (u2 * np.cosh(2 * cfg.r) + loss) - cross
            + 2 * ch ** 2 * sh ** 2 * u2 ** 2 + loss_weight * loss * u2)


def _hd_variance(u, loss, cfg):
    cross = np.sinh(2 * cfg.r) * np.real(_squeeze_phase(cfg) * u ** 2)
    return 0.5 * (abs2(u) * np.cosh(2 * cfg.r) + loss - cross)


def _pr_parts(cfg, phi):
    bog = bogoliubov_coefficients(cfg, phi)
    rc = recycling_constants(cfg, phi, bog)
    loss = abs2(rc.C1) * abs2(bog.Z) * (1.0 - cfg.T)
    u = np.conj(rc.C3) * np.exp(1j * np.asarray(phi, dtype=float))
    return bog, rc, loss, u


def sid_moments_pr(cfg, phi, paper_verbatim=False):
    """Photon number at port b of the recycled interferometer."""
    bog, rc, loss, u = _pr_parts(cfg, phi)
    mean = abs2(rc.C2) + abs2(rc.C3) * np.sinh(cfg.r) ** 2 + loss
    std, n = _clamped_sqrt(_sid_variance(np.conj(rc.C2), u, loss, cfg, phi, paper_verbatim))
    return MomentPair(mean, std, n)


def hd_moments_pr(cfg, phi):
    """Quadrature ``X`` at port b of the recycled interferometer."""
    bog, rc, loss, u = _pr_parts(cfg, phi)
    std, n = _clamped_sqrt(_hd_variance(u, loss, cfg))
    return MomentPair(np.sqrt(2.0) * np.real(rc.C2), std, n)


def sid_moments_conventional(cfg, phi, paper_verbatim=False):
    bog = bogoliubov_coefficients(cfg, phi)
    loss = abs2(bog.Z)
    u = bog.Y * np.exp(1j * np.asarray(phi, dtype=float))
    mean = abs2(bog.W2) + abs2(bog.Y) * np.sinh(cfg.r) ** 2 + loss
    std, n = _clamped_sqrt(_sid_variance(bog.W2, u, loss, cfg, phi, paper_verbatim))
    return MomentPair(mean, std, n)


def hd_moments_conventional(cfg, phi):
    bog = bogoliubov_coefficients(cfg, phi)
    u = bog.Y * np.exp(1j * np.asarray(phi, dtype=float))
    std, n = _clamped_sqrt(_hd_variance(u, abs2(bog.Z), cfg))
    return MomentPair(np.sqrt(2.0) * np.real(bog.W2), std, n)


def moments(scheme, model, cfg, phi, paper_verbatim=False):
    scheme, model = Scheme(scheme), Model(model)
    if scheme is Scheme.SID:
        fn = sid_moments_pr if model is Model.PR else sid_moments_conventional
        return fn(cfg, phi, paper_verbatim=paper_verbatim)
    fn = hd_moments_pr if model is Model.PR else hd_moments_conventional
    return fn(cfg, phi)


def observable_mean(scheme, model, cfg, phi):
    """Mean of the detected observable; differentiable in ``phi`` through :class:`Dual`."""
    return _MEANS[Scheme(scheme), Model(model)](cfg, phi)


def dphi_derivative(scheme, model, cfg, phi, method="forward_AD"):
    """``d<observable>/d phi``.

    ``method="forward_AD"`` propagates a dual number through the coefficient
    formulas; ``method="finite_difference"`` uses the fourth-order central stencil
    with step ``FD_STEP``.
    """
    mean = _MEANS[Scheme(scheme), Model(model)]
    if method == "forward_AD":
        out = derivative(mean(cfg, Dual.variable(np.asarray(phi, dtype=float))))
    elif method == "finite_difference":
        h = FD_STEP
        out = (-mean(cfg, phi + 2 * h) + 8 * mean(cfg, phi + h)
               - 8 * mean(cfg, phi - h) + mean(cfg, phi - 2 * h)) / (12 * h)
    else:
        raise ValueError(f"unknown derivative method {method!r}")
    out = np.asarray(out, dtype=float)
    return out if out.ndim else float(out)


def _stable_flag(model, cfg, phi, shape):
    if Model(model) is Model.CONVENTIONAL:
        return np.ones(shape, bool) if shape else True
    st = np.broadcast_to(recycling_constants(cfg, phi).stable, shape)
    return st if shape else bool(st)


def _ratio_or_inf(std, deriv):
    deriv = np.abs(deriv)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        out = np.where(deriv < ZERO_DERIVATIVE, np.inf, std / np.where(deriv == 0, 1.0, deriv))
    return out if out.ndim else float(out)


def phase_sensitivity(scheme, model, cfg, phi, method="forward_AD", paper_verbatim=False):
    """Linear error propagation ``delta_phi = std / |d mean / d phi|``.

    A vanishing slope (``|derivative| < 1e-300``) yields ``inf`` rather than an error.
    """
    scheme, model = Scheme(scheme), Model(model)
    mp = moments(scheme, model, cfg, phi, paper_verbatim=paper_verbatim)
    d = dphi_derivative(scheme, model, cfg, phi, method=method)
    delta_phi = _ratio_or_inf(mp.std_dev, d)
    return SensitivityReport(
        delta_phi=delta_phi,
        scheme=scheme,
        model=model,
        derivative=d,
        derivative_method=method,
        stable=_stable_flag(model, cfg, phi, np.shape(delta_phi)),
        std_dev=mp.std_dev,
    )

"""Round-by-round simulation of the recycling chain.

Each round is a full DSU(1,1) interferometer: OPA1, equal displacements on both
arms, phase ``phi`` on arm b, OPA2.  Output a is rotated by ``theta``, attenuated
by ``T`` and becomes the next round's a input, while arm b always receives the
original squeezed input again.

Modes of the working state: ``a`` (recirculating), ``b`` (arm b of the current
round), ``b_ref`` (the squeezed input, never touched) and ``v_ref`` (the loss
vacuum).  With ``ancilla="shared"`` the same ``v_ref`` enters every round, as in
the steady-state algebra; with ``ancilla="fresh"`` every round draws an
independent vacuum through :func:`loss_channel`.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from ..coeffs import stability_margin
from ..detection import MomentPair
from .gaussian import (
    GaussianState, copy_mode, displace, loss_channel, mix_with_reference, number_moments,
    phase_shift, quadrature_moments, squeeze, two_mode_squeeze, vacuum_state,
)

A_MODE, B_MODE, B_REF, V_REF = 0, 1, 2, 3
MAX_ROUNDS_CAP = 100_000
DIVERGENT_ROUNDS = 200


@dataclass(frozen=True)
class ChainResult:
    rounds_used: int
    converged: bool
    deltas: np.ndarray
    signature_deltas: np.ndarray
    b_number: MomentPair
    b_quadrature: MomentPair
    a_number: MomentPair
    internal_a_number: MomentPair
    internal_b_number: MomentPair
    state: GaussianState = field(repr=False)

    @property
    def settled_round(self):
        """Round after which the output no longer changed (the last round only confirmed it)."""
        return self.rounds_used - 1 if self.converged else None

    @property
    def n_total(self):
        return self.internal_a_number.mean + self.internal_b_number.mean

    def convergence_rate(self, floor=1e-9):
        """Observed geometric rate of the recirculating mode, from a log-linear fit.

        The fit uses the change of the complex signature of mode a (its mean and
        its symmetrised cross moments with the reference inputs).  Each entry is
        linear in the mode's expansion coefficients, so the change contracts by
        exactly ``|A|`` per round; the real covariance entries oscillate with
        ``arg A`` and give a noisy estimate.  Round one and anything below
        ``floor`` (relative to the first change) are excluded.
        """
        d = np.asarray(self.signature_deltas)
        k = np.arange(1, d.size + 1)
        ok = (k > 1) & np.isfinite(d) & (d > floor * d[0])
        if np.count_nonzero(ok) < 2:
            return 0.0
        slope = np.polyfit(k[ok], np.log(d[ok]), 1)[0]
        return float(np.exp(slope))


def default_max_rounds(abs_A, tol):
    if abs_A >= 1.0:
        return DIVERGENT_ROUNDS
    if abs_A == 0.0:
        return 3
    return int(min(MAX_ROUNDS_CAP, max(3, 10 * math.ceil(math.log(tol) / math.log(abs_A)))))


def initial_state(cfg):
    state = vacuum_state(4)
    return squeeze(state, B_REF, cfg.r, cfg.delta_xi)


def _scaled_change(new, old):
    scale = max(1.0, float(np.max(np.abs(new.cov))), float(np.max(np.abs(new.mean))))
    diff = max(float(np.max(np.abs(new.mean - old.mean))),
               float(np.max(np.abs(new.cov - old.cov))),
               float(np.max(np.abs(new.omega - old.omega))))
    return diff / scale


def _cross(cov, i, j):
    V = cov[2 * i:2 * i + 2, 2 * j:2 * j + 2]
    direct = 0.5 * (V[0, 0] - V[1, 1] + 1j * (V[0, 1] + V[1, 0]))
    conjugate = 0.5 * (V[0, 0] + V[1, 1] + 1j * (V[1, 0] - V[0, 1]))
    return direct, conjugate


def recirculating_signature(state):
    """Complex moments of mode a that are linear in its expansion coefficients."""
    mean = (state.mean[0] + 1j * state.mean[1]) / np.sqrt(2.0)
    return np.array([mean, *_cross(state.cov, A_MODE, B_REF), *_cross(state.cov, A_MODE, V_REF)])


def iterate_recycling(cfg, phi, max_rounds=None, tol=1e-12, ancilla="shared"):
    """Run the chain until the scaled max-norm change per round drops below ``tol``."""
    if ancilla not in ("shared", "fresh"):
        raise ValueError("ancilla must be 'shared' or 'fresh'")
    abs_A = 1.0 - float(stability_margin(cfg, phi))
    if max_rounds is None:
        max_rounds = default_max_rounds(abs_A, tol)
    if max_rounds < 1:
        raise ValueError("max_rounds must be >= 1")
    gamma = complex(cfg.gamma)
    state = initial_state(cfg)
    deltas = []
    sig_deltas = []
    sig = recirculating_signature(state)
    converged = False
    internal = None
    for _ in range(max_rounds):
        prev = state
        s = copy_mode(state, B_REF, B_MODE)
        s = two_mode_squeeze(s, A_MODE, B_MODE, cfg.g1, cfg.eta1)
        s = displace(displace(s, A_MODE, gamma), B_MODE, gamma)
        internal = s
        s = phase_shift(s, B_MODE, phi)
        s = two_mode_squeeze(s, A_MODE, B_MODE, cfg.g2, cfg.eta2)
        out = s
        s = phase_shift(s, A_MODE, cfg.theta)
        if ancilla == "shared":
            s = mix_with_reference(s, A_MODE, V_REF, cfg.T)
        else:
            s = loss_channel(s, A_MODE, cfg.T)
        state = s
        if not (np.all(np.isfinite(state.cov)) and np.all(np.isfinite(state.mean))):
            deltas.append(np.inf)
            sig_deltas.append(np.inf)
            break
        deltas.append(_scaled_change(state, prev))
        new_sig = recirculating_signature(state)
        sig_deltas.append(float(np.linalg.norm(new_sig - sig)))
        sig = new_sig
        if deltas[-1] < tol:
            converged = True
            break
    # a divergent run may end on overflowing moments; report them as they are
    with np.errstate(over="ignore", invalid="ignore"):
        return ChainResult(
            rounds_used=len(deltas),
            converged=converged,
            deltas=np.array(deltas),
            signature_deltas=np.array(sig_deltas),
            b_number=number_moments(out, B_MODE),
            b_quadrature=quadrature_moments(out, B_MODE),
            a_number=number_moments(out, A_MODE),
            internal_a_number=number_moments(internal, A_MODE),
            internal_b_number=number_moments(internal, B_MODE),
            state=state,
        )

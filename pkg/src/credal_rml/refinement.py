"""Thresholds for sufficiently good consequences and calibration of alpha.

For an act ``f`` and event ``E`` the composite act ``f_E x`` is evaluated
at a likelihood-maximizing prior once ``x`` is large enough.  Against a
non-face vertex ``p`` the face minimizer ``q*`` wins as soon as

    x >= (f.q*|_E - f.p|_E) / (q*(E) - p(E)),

so the threshold is a maximum over finitely many ratios.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import nnls

from credal_rml.core import (
    TAU_NORM,
    CredalSet,
    EventLike,
    as_act,
    as_event,
    event_prob_bounds,
    meu_value,
    splice,
)
from credal_rml.errors import InconsistentData, NotStrictNonnull, Unbounded


@dataclass(frozen=True)
class ThresholdResult:
    value: float
    binding_vertex: int | None  # row of C.vertices attaining the max ratio


@dataclass(frozen=True)
class AlphaEstimate:
    alpha: float
    unique: bool
    undershoot: float
    overshoot: float


def _require_nonnull(C: CredalSet, event) -> tuple[float, float]:
    lo, hi = event_prob_bounds(C, event)
    if lo <= TAU_NORM:
        raise NotStrictNonnull(f"{as_event(event)!r} is not strict-nonnull: min p(E) = {lo!r}")
    return lo, hi


def _face_and_ratios(C: CredalSet, event: EventLike, F: np.ndarray):
    """Vectorized pieces shared by the threshold computations.

    Returns ``(face_mask, face_value, ratios)`` where ``face_value[k]`` is
    ``min_{q in face} F[k]|_E . q`` and ``ratios[k, j]`` is the crossing
    level against vertex ``j`` (``-inf`` for face vertices).
    """
    mask = as_event(event).mask(C.n_states)
    V = C.vertices
    pe = V[:, mask].sum(axis=1)
    face = pe >= pe.max() - C.tol
    on_e = F[:, mask] @ V[:, mask].T  # (acts, vertices)
    face_value = on_e[:, face].min(axis=1)
    gap = pe.max() - pe
    ratios = np.full(on_e.shape, -np.inf)
    nf = ~face
    if nf.any():
        ratios[:, nf] = (face_value[:, None] - on_e[:, nf]) / gap[nf]
    return face, face_value, ratios


def ml_conditional_values(C: CredalSet, event: EventLike, F) -> np.ndarray:
    """ML conditional certainty equivalents for each row of ``F``."""
    F = np.atleast_2d(np.asarray(F, dtype=float))
    _, face_value, _ = _face_and_ratios(C, event, F)
    _, hi = event_prob_bounds(C, event)
    return face_value / hi


def threshold_values(C: CredalSet, event: EventLike, F) -> np.ndarray:
    """Vectorized :func:`sufficiently_good_threshold` values for rows of ``F``."""
    F = np.atleast_2d(np.asarray(F, dtype=float))
    _require_nonnull(C, event)
    _, face_value, ratios = _face_and_ratios(C, event, F)
    _, hi = event_prob_bounds(C, event)
    return np.maximum(ratios.max(axis=1), face_value / hi)


def sufficiently_good_threshold(C: CredalSet, event: EventLike, f) -> ThresholdResult:
    """Payoff level off ``event`` above which ``f`` is evaluated on the ML face.

    The value is never below the ML conditional certainty equivalent of
    ``f``, so it also dominates the conditional value under any rule of
    the RML family.
    """
    f = as_act(f, C.n_states)
    _require_nonnull(C, event)
    _, face_value, ratios = _face_and_ratios(C, event, f[None, :])
    _, hi = event_prob_bounds(C, event)
    ml_ce = float(face_value[0] / hi)
    r = ratios[0]
    j = int(np.argmax(r))
    if np.isfinite(r[j]) and r[j] > ml_ce:
        return ThresholdResult(float(r[j]), j)
    return ThresholdResult(ml_ce, None)


def minimizer_in_face(C: CredalSet, event: EventLike, act, tol: float | None = None) -> bool:
    """Does some MEU minimizer of ``act`` over ``C`` lie in the ML face?"""
    tol = C.tol if tol is None else tol
    act = np.asarray(act, dtype=float)
    mask = as_event(event).mask(C.n_states)
    pe = C.vertices[:, mask].sum(axis=1)
    face = pe >= pe.max() - C.tol
    vals = C.vertices @ act
    scale = max(1.0, float(np.abs(act).max()))
    return vals[face].min() - vals.min() <= tol * scale


def shrink_threshold(C: CredalSet, event: EventLike, f, u_max: float) -> float:
    """Smallest ``K >= 1`` with ``(f/K)_E u_max`` evaluated on the ML face."""
    f = as_act(f, C.n_states)
    if not u_max > 0:
        raise ValueError("u_max must be positive")
    mask = as_event(event).mask(C.n_states)
    if f[mask].min() < -TAU_NORM or f[mask].max() > u_max * (1 + 1e-12):
        raise ValueError("f must take values in [0, u_max] on the event")
    _require_nonnull(C, event)
    _, _, ratios = _face_and_ratios(C, event, f[None, :])
    worst = ratios.max()
    if not np.isfinite(worst) or worst <= u_max:
        return 1.0
    K = worst / u_max
    if not np.isfinite(K):
        raise Unbounded("no finite shrinking factor exists")
    return float(K)


def mix_threshold(C: CredalSet, event: EventLike, f, u_min: float, u_max: float) -> float:
    """Largest ``lam`` in ``(0, 1]`` keeping the mixture on the ML face.

    The mixture is ``lam * f_E u_max + (1 - lam) * (u_min)_E u_max``.
    """
    f = as_act(f, C.n_states)
    if not u_min < u_max:
        raise ValueError("need u_min < u_max")
    mask = as_event(event).mask(C.n_states)
    if f[mask].min() < u_min - 1e-12 or f[mask].max() > u_max + 1e-12:
        raise ValueError("f must take values in [u_min, u_max] on the event")
    _require_nonnull(C, event)
    _, _, ratios = _face_and_ratios(C, event, (f - u_min)[None, :])
    worst = ratios.max()
    if not np.isfinite(worst) or worst <= u_max - u_min:
        return 1.0
    return float((u_max - u_min) / worst)


def step_terms(C: CredalSet, event: EventLike, f, x: float, x_star: float) -> tuple[float, float]:
    """``(undershoot, overshoot)`` of ``f`` at conditional value ``x``.

    undershoot = U(x) - U(f_E x); overshoot = U(f_E x*) - U(x_E x*).
    """
    n = C.n_states
    under = x - meu_value(C, splice(f, event, x))
    over = meu_value(C, splice(f, event, x_star)) - meu_value(C, splice(np.full(n, x), event, x_star))
    return float(under), float(over)


def alpha_from_preference(C: CredalSet, event: EventLike, f, cond_value: float) -> AlphaEstimate:
    """Recover the contraction weight from one conditional certainty equivalent.

    ``unique`` is False when ``f`` does not discriminate (its FB and ML
    conditional values coincide); then every alpha is consistent and
    ``alpha`` is reported as 0.
    """
    f = as_act(f, C.n_states)
    _require_nonnull(C, event)
    x = float(cond_value)
    thr = sufficiently_good_threshold(C, event, f).value
    # any larger x* yields the same alpha: the (1 - p*(E)) x* terms cancel
    x_star = max(thr, x) + 1.0
    under, over = step_terms(C, event, f, x, x_star)
    scale = max(1.0, abs(x), float(np.abs(f).max()))
    tau = 1e-9 * scale
    if under < -tau or over < -tau:
        raise InconsistentData(
            f"conditional value {x!r} violates undershooting/overshooting "
            f"(undershoot={under:.3g}, overshoot={over:.3g})"
        )
    under, over = max(under, 0.0), max(over, 0.0)
    total = under + over
    if total <= tau:
        return AlphaEstimate(0.0, False, under, over)
    return AlphaEstimate(under / total, True, under, over)


def discriminating_act(C: CredalSet, event: EventLike) -> np.ndarray | None:
    """An act whose FB and ML conditional values differ, if one exists.

    Takes the non-face vertex whose posterior lies farthest from the hull of
    the face posteriors and points the act away from that hull.  Returns
    ``None`` when every posterior lies in the face's posterior hull, in
    which case FB and ML coincide for every act.
    """
    mask = as_event(event).mask(C.n_states)
    _require_nonnull(C, event)
    V = C.vertices
    pe = V[:, mask].sum(axis=1)
    face = pe >= pe.max() - C.tol
    post = V[:, mask] / pe[:, None]
    Q = post[face]
    best, best_dir = 0.0, None
    for j in np.flatnonzero(~face):
        # nearest point of the face-posterior hull; the heavy last row
        # pins the weights to sum to one
        M = 1e3
        A = np.vstack([Q.T, M * np.ones(Q.shape[0])])
        w, _ = nnls(A, np.r_[post[j], M])
        d = post[j] - Q.T @ w
        dist = float(np.linalg.norm(d))
        if dist > best:
            best, best_dir = dist, d
    if best_dir is None or best <= 1e3 * C.tol:
        return None
    f = np.zeros(C.n_states)
    f[mask] = -best_dir / best
    return f

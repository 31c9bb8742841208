"""Persuasion with an ambiguous signalling device.

The sender commits to a set of kernels (an ambiguous device); the receiver
sees a message, updates the joint credal set with some rule and plays the
action with the best worst-case payoff.  The sender evaluates the induced
play by MEU over the kernels.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from credal_rml.core import (
    RML,
    CredalSet,
    Event,
    StateSpace,
    UpdateRule,
    as_prior,
    update,
)
from credal_rml.errors import BadLambda, DimensionMismatch, NotTwoStates

TIE_TOL = 1e-9


@dataclass(frozen=True)
class PersuasionGame:
    states: StateSpace
    prior: np.ndarray
    actions: tuple[str, ...]
    sender_payoff: np.ndarray  # action x state
    receiver_payoff: np.ndarray  # action x state

    def __post_init__(self):
        n = len(self.states)
        object.__setattr__(self, "prior", as_prior(self.prior, n))
        object.__setattr__(self, "actions", tuple(self.actions))
        for name in ("sender_payoff", "receiver_payoff"):
            M = np.asarray(getattr(self, name), dtype=float)
            if M.shape != (len(self.actions), n):
                raise DimensionMismatch(f"{name} must be {len(self.actions)}x{n}, got {M.shape}")
            object.__setattr__(self, name, M)


@dataclass(frozen=True)
class AmbiguousDevice:
    messages: tuple[str, ...]
    kernels: tuple[np.ndarray, ...]  # each message x state, columns sum to one

    def __post_init__(self):
        msgs = tuple(self.messages)
        if not self.kernels:
            raise ValueError("a device needs at least one kernel")
        ks = []
        for K in self.kernels:
            K = np.asarray(K, dtype=float)
            if K.ndim != 2 or K.shape[0] != len(msgs):
                raise DimensionMismatch(f"kernel shape {K.shape} does not match {len(msgs)} messages")
            if np.any(K < -1e-12) or np.abs(K.sum(axis=0) - 1).max() > 1e-9:
                raise ValueError("every kernel column must be a probability vector")
            ks.append(K)
        if len({K.shape for K in ks}) != 1:
            raise DimensionMismatch("kernels disagree on the state dimension")
        object.__setattr__(self, "messages", msgs)
        object.__setattr__(self, "kernels", tuple(ks))


def bll_example_game() -> PersuasionGame:
    """Two states, three receiver actions; the sender wants the highest action."""
    return PersuasionGame(
        states=StateSpace(("w_l", "w_h")),
        prior=np.array([0.5, 0.5]),
        actions=("a_l", "a_m", "a_h"),
        sender_payoff=np.array([[-1.0, -1.0], [0.0, 0.0], [1.0, 1.0]]),
        receiver_payoff=np.array([[3.0, -1.0], [2.0, 2.0], [-1.0, 3.0]]),
    )


def bll_device(lam: float) -> AmbiguousDevice:
    """Two kernels mixing an informative device (weight ``lam``) with a noisy one.

    The second kernel swaps the roles of the two low messages.
    """
    lam = float(lam)
    if not (0.0 <= lam <= 1.0):
        raise BadLambda(f"lambda must lie in [0, 1], got {lam}")
    m_l = [2 * lam / 3, 0.0]
    m_l2 = [0.75 * (1 - lam), 0.25 * (1 - lam)]
    m_h = [lam / 3 + 0.25 * (1 - lam), lam + 0.75 * (1 - lam)]
    k1 = np.array([m_l, m_l2, m_h])
    k2 = np.array([m_l2, m_l, m_h])
    return AmbiguousDevice(("m_l", "m_l'", "m_h"), (k1, k2))


def _check_dims(g: PersuasionGame, d: AmbiguousDevice) -> None:
    if d.kernels[0].shape[1] != len(g.states):
        raise DimensionMismatch(f"device has {d.kernels[0].shape[1]} states, game has {len(g.states)}")


def _joint(g: PersuasionGame, K: np.ndarray) -> np.ndarray:
    # cell index = state * n_messages + message
    return (g.prior[:, None] * K.T).ravel()


def device_prior_set(g: PersuasionGame, d: AmbiguousDevice, kernels: Sequence[int] | None = None) -> CredalSet:
    """Joint priors over (state, message), one per kernel."""
    _check_dims(g, d)
    idx = range(len(d.kernels)) if kernels is None else kernels
    return CredalSet([_joint(g, d.kernels[k]) for k in idx])


def message_event(g: PersuasionGame, d: AmbiguousDevice, m: int) -> Event:
    M = len(d.messages)
    return Event(frozenset(w * M + m for w in range(len(g.states))))


def message_likelihoods(d: AmbiguousDevice, g: PersuasionGame) -> np.ndarray:
    """Overall probability of each message under each kernel (kernel x message)."""
    _check_dims(g, d)
    return np.array([K @ g.prior for K in d.kernels])


def is_uniform_likelihood(d: AmbiguousDevice, g: PersuasionGame, tol: float = 1e-9) -> bool:
    L = message_likelihoods(d, g)
    return bool(np.abs(L - L[0]).max() <= tol)


def message_posteriors(g: PersuasionGame, d: AmbiguousDevice, rule: UpdateRule) -> dict[str, CredalSet]:
    """Posterior sets over the payoff states after each message.

    Kernels that never send a message cannot have generated it, so they are
    dropped before updating on that message.  Messages no kernel sends are
    omitted.
    """
    _check_dims(g, d)
    L = message_likelihoods(d, g)
    n, M = len(g.states), len(d.messages)
    out = {}
    for m, name in enumerate(d.messages):
        live = [k for k in range(len(d.kernels)) if L[k, m] > 1e-12]
        if not live:
            continue
        C = device_prior_set(g, d, live)
        post = update(C, message_event(g, d, m), rule)
        states = post.vertices[:, m::M][:, :n]
        out[name] = CredalSet(states)
    return out


def _best_action(g: PersuasionGame, post: CredalSet) -> int:
    recv = (g.receiver_payoff @ post.vertices.T).min(axis=1)
    best = np.flatnonzero(recv >= recv.max() - TIE_TOL)
    send = (g.sender_payoff[best] @ post.vertices.T).min(axis=1)
    return int(best[np.argmax(send)])


def receiver_response(g: PersuasionGame, d: AmbiguousDevice, rule: UpdateRule) -> dict[str, str]:
    """Receiver's action after each message; ties go the sender's way."""
    return {m: g.actions[_best_action(g, P)] for m, P in message_posteriors(g, d, rule).items()}


def sender_value(g: PersuasionGame, d: AmbiguousDevice, rule: UpdateRule) -> float:
    """Sender's MEU over kernels of the play induced by ``rule``."""
    play = receiver_response(g, d, rule)
    vals = []
    for K in d.kernels:
        v = 0.0
        for m, name in enumerate(d.messages):
            if name in play:
                a = g.actions.index(play[name])
                v += float(K[m] @ (g.prior * g.sender_payoff[a]))
        vals.append(v)
    return float(min(vals))


def _indirect_payoff(g: PersuasionGame, q: np.ndarray) -> np.ndarray:
    # q = probability of the second state; sender-favourable ties
    P = np.column_stack([1 - q, q])
    recv = P @ g.receiver_payoff.T
    send = P @ g.sender_payoff.T
    best = recv >= recv.max(axis=1, keepdims=True) - TIE_TOL
    return np.where(best, send, -np.inf).max(axis=1)


def bayesian_optimum(g: PersuasionGame, grid: int = 10_000) -> float:
    """Concavified sender value at the prior, on a grid of ``grid + 1`` posteriors."""
    if len(g.states) != 2:
        raise NotTwoStates(f"concavification is implemented for two states, got {len(g.states)}")
    q = np.linspace(0.0, 1.0, int(grid) + 1)
    v = _indirect_payoff(g, q)
    # upper hull by a monotone chain
    hull: list[int] = []
    for i in range(len(q)):
        while len(hull) >= 2:
            a, b = hull[-2], hull[-1]
            if (v[b] - v[a]) * (q[i] - q[a]) <= (v[i] - v[a]) * (q[b] - q[a]):
                hull.pop()
            else:
                break
        hull.append(i)
    return float(np.interp(g.prior[1], q[hull], v[hull]))


@dataclass(frozen=True)
class SweepRow:
    lam: float
    alpha: float
    actions: dict
    sender_value: float
    uniform_likelihood: bool


def persuasion_sweep(
    lambdas: Iterable[float],
    alphas: Iterable[float],
    game: PersuasionGame | None = None,
) -> list[SweepRow]:
    """Receiver play and sender value for every ``(lambda, alpha)`` pair."""
    g = game or bll_example_game()
    alphas = list(alphas)
    rows = []
    for lam in lambdas:
        d = bll_device(lam)
        uni = is_uniform_likelihood(d, g)
        for a in alphas:
            rule = RML(a)
            rows.append(SweepRow(float(lam), float(a), receiver_response(g, d, rule), sender_value(g, d, rule), uni))
    return rows

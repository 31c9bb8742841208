"""Ambiguous signals about a payoff state, and the six-case summary table.

Payoff states are ``theta1, theta2`` with a known prior ``beta`` on
``theta1``.  A binary signal reports the state correctly with probability
``lambda1`` or ``lambda2`` and it is unknown which device is in use; ``mu``
is the weight on the first device.  The joint state space has four cells,
ordered ``(theta1, s1), (theta2, s1), (theta1, s2), (theta2, s2)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Literal, Sequence

import numpy as np

from credal_rml.core import RML, CredalSet, Event, StateSpace, UpdateRule, update
from credal_rml.errors import BadModel

Signal = Literal["s1", "s2"]

CELLS = ("theta1_s1", "theta2_s1", "theta1_s2", "theta2_s2")
SIGNAL_EVENTS = {"s1": Event(frozenset({0, 1})), "s2": Event(frozenset({2, 3}))}
# cell holding theta1 inside each signal event
_THETA1_CELL = {"s1": 0, "s2": 2}

COMPARISON_TOL = 1e-7


@dataclass(frozen=True)
class SignalModel:
    beta: float
    lambda1: float
    lambda2: float

    def __post_init__(self):
        for name in ("beta", "lambda1", "lambda2"):
            v = float(getattr(self, name))
            if not (0.0 <= v <= 1.0):
                raise BadModel(f"{name} must lie in [0, 1], got {v}")
            object.__setattr__(self, name, v)
        if self.lambda1 < self.lambda2:
            raise BadModel("lambda1 must be at least lambda2")
        if self.lambda1 + self.lambda2 < 1.0 - 1e-12:
            raise BadModel("average accuracy (lambda1 + lambda2)/2 must be at least 1/2")

    @property
    def mean_accuracy(self) -> float:
        return 0.5 * (self.lambda1 + self.lambda2)

    def joint(self, mu: float) -> np.ndarray:
        """``p_mu`` over the four cells."""
        b = self.beta
        acc = mu * self.lambda1 + (1 - mu) * self.lambda2
        return np.array([b * acc, (1 - b) * (1 - acc), b * (1 - acc), (1 - b) * acc])

    def posterior_theta1(self, mu, signal: Signal) -> np.ndarray | float:
        """``pi_mu(theta1 | signal)``; vectorized over ``mu``."""
        mu = np.asarray(mu, dtype=float)
        acc = mu * self.lambda1 + (1 - mu) * self.lambda2
        b = self.beta
        if signal == "s1":
            num, den = b * acc, b * acc + (1 - b) * (1 - acc)
        else:
            num, den = b * (1 - acc), b * (1 - acc) + (1 - b) * acc
        out = num / den
        return float(out) if out.ndim == 0 else out

    def likelihood_slope(self, signal: Signal) -> float:
        """Derivative in ``mu`` of the signal's probability (it is linear in ``mu``)."""
        s = (self.lambda1 - self.lambda2) * (2 * self.beta - 1)
        return s if signal == "s1" else -s


def _check_signal(signal: str) -> Signal:
    if signal not in SIGNAL_EVENTS:
        raise ValueError(f"signal must be 's1' or 's2', got {signal!r}")
    return signal  # type: ignore[return-value]


def build_signal_credal(m: SignalModel) -> tuple[StateSpace, CredalSet]:
    """The credal set spanned by ``p_0`` and ``p_1`` on the four cells."""
    return StateSpace(CELLS), CredalSet([m.joint(1.0), m.joint(0.0)])


def posterior_interval(m: SignalModel, alpha: float | UpdateRule, signal: Signal) -> tuple[float, float]:
    """Range of posterior probabilities of ``theta1`` after ``signal``.

    ``alpha`` is an RML weight or any update rule.
    """
    signal = _check_signal(signal)
    rule = RML(alpha) if isinstance(alpha, (int, float)) else alpha
    _, C = build_signal_credal(m)
    post = update(C, SIGNAL_EVENTS[signal], rule)
    vals = post.vertices[:, _THETA1_CELL[signal]]
    return float(vals.min()), float(vals.max())


@dataclass(frozen=True)
class Table1Row:
    beta: float
    signal: str
    alpha: float
    ml_prior: str  # "mu=1", "mu=0" or "All"
    eval_f: float
    benchmark: float
    comparison: str  # "lower", "equal" or "higher"

    def as_dict(self) -> dict:
        return {
            "beta": self.beta,
            "signal": self.signal,
            "alpha": self.alpha,
            "ml_prior": self.ml_prior,
            "eval_f": self.eval_f,
            "benchmark": self.benchmark,
            "comparison": self.comparison,
        }


def benchmark_posterior(m: SignalModel, signal: Signal) -> float:
    """Posterior of ``theta1`` under an unambiguous device of mean accuracy."""
    return m.posterior_theta1(0.5, _check_signal(signal))


def _compare(value: float, bench: float, tol: float = COMPARISON_TOL) -> str:
    if value > bench + tol:
        return "higher"
    if value < bench - tol:
        return "lower"
    return "equal"


def table1_row(m: SignalModel, alpha: float, signal: Signal) -> Table1Row:
    """ML prior, MEU value of the bet on ``theta1``, and its comparison with the benchmark."""
    signal = _check_signal(signal)
    slope = m.likelihood_slope(signal)
    if slope > 1e-12:
        ml_prior = "mu=1"
    elif slope < -1e-12:
        ml_prior = "mu=0"
    else:
        ml_prior = "All"
    lo, _ = posterior_interval(m, alpha, signal)
    bench = benchmark_posterior(m, signal)
    return Table1Row(m.beta, signal, float(alpha), ml_prior, lo, bench, _compare(lo, bench))


def table1_case(m: SignalModel, alpha: float, signal: Signal) -> tuple[str, float, str]:
    """The summary table's case analysis, written out directly.

    Returns ``(ml_prior, eval_f, comparison)`` without touching the credal
    machinery, for cross-checking :func:`table1_row`.  Assumes
    ``lambda1 > lambda2`` so that the two devices differ.
    """
    signal = _check_signal(signal)
    b = m.beta
    if b > 0.5:
        # the retained mu-range is [alpha, 1] after s1 and [0, 1 - alpha] after s2
        mu = alpha if signal == "s1" else 1 - alpha
        comparison = "lower" if alpha < 0.5 else ("equal" if alpha == 0.5 else "higher")
        return ("mu=1" if signal == "s1" else "mu=0"), m.posterior_theta1(mu, signal), comparison
    ml = ("mu=0" if signal == "s1" else "mu=1") if b < 0.5 else "All"
    mu = 0.0 if signal == "s1" else 1.0
    return ml, m.posterior_theta1(mu, signal), "lower"


# order of the six (beta, signal) cases in the summary table
CASE_ORDER = (("gt", "s1"), ("gt", "s2"), ("lt", "s1"), ("lt", "s2"), ("eq", "s1"), ("eq", "s2"))


def _beta_class(beta: float) -> str:
    return "gt" if beta > 0.5 else ("lt" if beta < 0.5 else "eq")


def table1_rows(
    betas: Iterable[float],
    lambda1: float,
    lambda2: float,
    alphas: Sequence[float],
) -> list[Table1Row]:
    """All rows for the given betas and alphas, grouped in the table's case order."""
    rows = []
    for beta in betas:
        m = SignalModel(beta, lambda1, lambda2)
        for signal in ("s1", "s2"):
            for a in alphas:
                rows.append(table1_row(m, a, signal))
    rank = {c: i for i, c in enumerate(CASE_ORDER)}
    return sorted(rows, key=lambda r: (rank[(_beta_class(r.beta), r.signal)], r.beta, r.alpha))

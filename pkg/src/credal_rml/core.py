"""Credal-set geometry and prior-by-prior updating rules.

A credal set is stored as the minimal list of its extreme points.  All
updating rules here share one shape: pick a retained subset of the priors,
then Bayes-update each retained prior on the observed event.  They differ
only in which subset is retained:

* ``FB`` keeps everything,
* ``ML`` keeps the face of priors that maximize the event's probability,
* ``RML(alpha)`` keeps ``alpha * face + (1 - alpha) * C``,
* ``LikelihoodRatio(threshold)`` keeps ``{p : p(E) >= threshold * max p(E)}``.

Because Bayes' rule is a linear-fractional map it sends segments to
segments, so the posterior set is the hull of the posteriors of the
retained set's vertices.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence, Union

import numpy as np
from scipy.optimize import linprog, nnls

from credal_rml.errors import (
    BadAlpha,
    DimensionMismatch,
    EmptyInput,
    InvalidPrior,
    MissingAlpha,
    NotStrictNonnull,
    ZeroLikelihood,
)

TAU_NORM = 1e-9
_DEFAULT_TAU_GEOM = 1e-9


def default_tol() -> float:
    """Geometric tolerance; the ``CREDAL_TOL`` environment variable overrides it."""
    raw = os.environ.get("CREDAL_TOL")
    if raw is None:
        return _DEFAULT_TAU_GEOM
    tol = float(raw)
    if not (tol > 0 and np.isfinite(tol)):
        raise ValueError(f"CREDAL_TOL must be a positive float, got {raw!r}")
    return tol


# --------------------------------------------------------------------------
# states, events, priors, acts
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class StateSpace:
    labels: tuple[str, ...]

    def __post_init__(self):
        labels = tuple(str(s) for s in self.labels)
        if len(labels) < 2:
            raise ValueError("a state space needs at least two states")
        if len(set(labels)) != len(labels):
            raise ValueError(f"state labels must be unique: {labels}")
        object.__setattr__(self, "labels", labels)

    def __len__(self) -> int:
        return len(self.labels)

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise KeyError(f"unknown state {label!r}") from None

    def event(self, labels: Iterable[str]) -> "Event":
        return Event(frozenset(self.index(s) for s in labels))

    def full(self) -> "Event":
        return Event.full(len(self))


@dataclass(frozen=True)
class Event:
    """A set of state indices."""

    members: frozenset[int]

    def __post_init__(self):
        members = frozenset(int(i) for i in self.members)
        if any(i < 0 for i in members):
            raise ValueError("state indices must be nonnegative")
        object.__setattr__(self, "members", members)

    @classmethod
    def full(cls, n: int) -> "Event":
        return cls(frozenset(range(n)))

    def mask(self, n: int) -> np.ndarray:
        if self.members and max(self.members) >= n:
            raise DimensionMismatch(f"event {sorted(self.members)} does not fit {n} states")
        m = np.zeros(n, dtype=bool)
        m[list(self.members)] = True
        return m

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(sorted(self.members))

    def __repr__(self) -> str:
        return f"Event({sorted(self.members)})"


EventLike = Union[Event, Iterable[int]]


def as_event(e: EventLike) -> Event:
    return e if isinstance(e, Event) else Event(frozenset(e))


def as_prior(p, n: int | None = None) -> np.ndarray:
    """Validate a probability vector and return it as a float array."""
    arr = np.asarray(p, dtype=float)
    if arr.ndim != 1:
        raise InvalidPrior("a prior must be a 1-d vector")
    if n is not None and arr.shape[0] != n:
        raise DimensionMismatch(f"prior has {arr.shape[0]} entries, expected {n}")
    if not np.all(np.isfinite(arr)) or np.any(arr < -TAU_NORM):
        raise InvalidPrior(f"prior entries must be finite and nonnegative: {arr}")
    if abs(arr.sum() - 1.0) > max(TAU_NORM, 1e-9 * arr.size):
        raise InvalidPrior(f"prior sums to {arr.sum()!r}, not 1")
    return np.clip(arr, 0.0, None)


def as_act(f, n: int | None = None) -> np.ndarray:
    arr = np.asarray(f, dtype=float)
    if arr.ndim != 1:
        raise ValueError("an act must be a 1-d utility vector")
    if n is not None and arr.shape[0] != n:
        raise DimensionMismatch(f"act has {arr.shape[0]} entries, expected {n}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("act utilities must be finite")
    return arr


def constant_act(n: int, c: float) -> np.ndarray:
    return np.full(n, float(c))


def splice(f, event: EventLike, h) -> np.ndarray:
    """The act paying ``f`` on ``event`` and ``h`` off it.

    ``h`` may be a scalar (a constant act).
    """
    f = np.asarray(f, dtype=float)
    n = f.shape[-1]
    h = np.broadcast_to(np.asarray(h, dtype=float), f.shape)
    return np.where(as_event(event).mask(n), f, h)


# --------------------------------------------------------------------------
# credal sets
# --------------------------------------------------------------------------


def _in_cone(point: np.ndarray, others: np.ndarray, tol: float) -> bool:
    # For vectors on the simplex, membership in the cone spanned by ``others``
    # coincides with membership in their convex hull.
    if others.shape[0] == 0:
        return False
    _, resid = nnls(others.T, point)
    return resid <= tol


def _reduce_vertices(points: np.ndarray, tol: float) -> np.ndarray:
    # drop near-duplicates first; cheap and keeps the NNLS systems small
    keep: list[np.ndarray] = []
    for p in points:
        if not any(np.max(np.abs(p - q)) <= tol for q in keep):
            keep.append(p)
    pts = np.array(keep)
    if pts.shape[0] <= 2:
        return pts
    alive = np.ones(pts.shape[0], dtype=bool)
    for i in range(pts.shape[0]):
        alive[i] = False
        if not _in_cone(pts[i], pts[alive], tol):
            alive[i] = True
    return pts[alive]


def _canonical_order(vertices: np.ndarray) -> np.ndarray:
    # round the sort key so float noise does not reorder equal sets
    key = np.round(vertices, 8)
    order = np.lexsort(key.T[::-1])
    return vertices[order]


class CredalSet:
    """Convex hull of finitely many priors, stored by its extreme points.

    Construction always reduces to the minimal vertex list and sorts it
    lexicographically, so two equal sets built from different point lists
    compare equal.
    """

    __slots__ = ("_vertices", "tol")
    __hash__ = None  # type: ignore[assignment]

    def __init__(self, points, tol: float | None = None):
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        if pts.size == 0:
            raise EmptyInput("a credal set needs at least one prior")
        n = pts.shape[1]
        pts = np.array([as_prior(p, n) for p in pts])
        self.tol = default_tol() if tol is None else float(tol)
        verts = _canonical_order(_reduce_vertices(pts, self.tol))
        verts.setflags(write=False)
        self._vertices = verts

    @classmethod
    def _trusted(cls, vertices: np.ndarray, tol: float) -> "CredalSet":
        obj = cls.__new__(cls)
        obj.tol = tol
        v = np.array(vertices, dtype=float)
        v.setflags(write=False)
        obj._vertices = v
        return obj

    @property
    def vertices(self) -> np.ndarray:
        return self._vertices

    @property
    def n_states(self) -> int:
        return self._vertices.shape[1]

    def __len__(self) -> int:
        return self._vertices.shape[0]

    def __iter__(self):
        return iter(self._vertices)

    def __repr__(self) -> str:
        rows = ", ".join("(" + ", ".join(f"{x:.6g}" for x in v) + ")" for v in self._vertices)
        return f"CredalSet[{rows}]"

    def probabilities(self, event: EventLike) -> np.ndarray:
        """``p(E)`` at every vertex."""
        return self._vertices[:, as_event(event).mask(self.n_states)].sum(axis=1)

    def contains(self, point, tol: float | None = None) -> bool:
        """LP membership test: is ``point`` within ``tol`` (L1) of the hull?"""
        tol = self.tol if tol is None else tol
        p = np.asarray(point, dtype=float)
        V = self._vertices
        k, n = V.shape
        # variables: weights (k), positive and negative slack (n each)
        c = np.r_[np.zeros(k), np.ones(2 * n)]
        A_eq = np.vstack([
            np.hstack([V.T, np.eye(n), -np.eye(n)]),
            np.r_[np.ones(k), np.zeros(2 * n)][None, :],
        ])
        b_eq = np.r_[p, 1.0]
        res = linprog(c, A_eq=A_eq, b_eq=b_eq, bounds=(0, None), method="highs")
        if res.status != 0:
            return False
        return res.fun <= max(tol, 1e-12) * 10

    def issubset(self, other: "CredalSet", tol: float | None = None) -> bool:
        return all(other.contains(v, tol) for v in self._vertices)

    def same_as(self, other: "CredalSet", tol: float | None = None) -> bool:
        """Vertex-wise equality of two canonical sets."""
        tol = max(self.tol, other.tol) if tol is None else tol
        if self.n_states != other.n_states or len(self) != len(other):
            return False
        unmatched = list(range(len(other)))
        for v in self._vertices:
            for j in unmatched:
                if np.max(np.abs(v - other._vertices[j])) <= 10 * tol:
                    unmatched.remove(j)
                    break
            else:
                return False
        return True

    def __eq__(self, other) -> bool:
        if not isinstance(other, CredalSet):
            return NotImplemented
        return self.same_as(other)

    def to_list(self) -> list[list[float]]:
        return self._vertices.tolist()


def hull_reduce(points: Sequence, tol: float | None = None) -> CredalSet:
    """Minimal extreme-point representation of the hull of ``points``."""
    if len(points) == 0:
        raise EmptyInput("hull_reduce needs at least one point")
    return CredalSet(points, tol)


def event_prob_bounds(C: CredalSet, event: EventLike) -> tuple[float, float]:
    pe = C.probabilities(event)
    return float(pe.min()), float(pe.max())


def _face_mask(C: CredalSet, event: EventLike) -> np.ndarray:
    pe = C.probabilities(event)
    return pe >= pe.max() - C.tol


def max_likelihood_face(C: CredalSet, event: EventLike) -> CredalSet:
    """Sub-polytope of priors assigning maximal probability to ``event``."""
    return CredalSet._trusted(C.vertices[_face_mask(C, event)], C.tol)


def _check_unit(value: float, name: str, exc=BadAlpha) -> float:
    value = float(value)
    if not (0.0 <= value <= 1.0):
        raise exc(f"{name} must lie in [0, 1], got {value}")
    return value


def contract(C: CredalSet, event: EventLike, alpha: float) -> CredalSet:
    """``alpha * C*(E) + (1 - alpha) * C`` as a credal set."""
    alpha = _check_unit(alpha, "alpha")
    if alpha == 0.0:
        return C
    face = C.vertices[_face_mask(C, event)]
    if alpha == 1.0:
        return CredalSet._trusted(face, C.tol)
    mixes = alpha * face[:, None, :] + (1 - alpha) * C.vertices[None, :, :]
    return CredalSet(mixes.reshape(-1, C.n_states), C.tol)


def bayes_update(p, event: EventLike) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    mask = as_event(event).mask(p.shape[0])
    pe = p[mask].sum()
    if pe <= TAU_NORM:
        raise ZeroLikelihood(f"prior gives the event probability {pe!r}")
    return np.where(mask, p, 0.0) / pe


# --------------------------------------------------------------------------
# rules
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class FB:
    """Full Bayesian: update every prior."""

    def __str__(self) -> str:
        return "FB"


@dataclass(frozen=True)
class ML:
    """Maximum likelihood: update only the likelihood-maximizing face."""

    def __str__(self) -> str:
        return "ML"


@dataclass(frozen=True)
class RML:
    alpha: float

    def __post_init__(self):
        object.__setattr__(self, "alpha", _check_unit(self.alpha, "alpha"))

    def __str__(self) -> str:
        return f"RML({self.alpha:g})"


@dataclass(frozen=True)
class ContingentRML:
    """RML whose contraction weight depends on the conditioning event."""

    alphas: Mapping[Event, float] = field(default_factory=dict)

    def __post_init__(self):
        norm = {as_event(e): _check_unit(a, "alpha") for e, a in dict(self.alphas).items()}
        object.__setattr__(self, "alphas", norm)

    def __hash__(self):
        return hash(tuple(sorted((tuple(e), a) for e, a in self.alphas.items())))

    def alpha_for(self, event: EventLike) -> float:
        e = as_event(event)
        try:
            return self.alphas[e]
        except KeyError:
            raise MissingAlpha(f"no alpha given for {e!r}") from None

    def __str__(self) -> str:
        body = ", ".join(f"{sorted(e.members)}: {a:g}" for e, a in self.alphas.items())
        return f"ContingentRML({{{body}}})"


@dataclass(frozen=True)
class LikelihoodRatio:
    """Keep priors with ``p(E) >= threshold * max p(E)``, then update."""

    threshold: float

    def __post_init__(self):
        object.__setattr__(self, "threshold", _check_unit(self.threshold, "threshold"))

    def __str__(self) -> str:
        return f"LikelihoodRatio({self.threshold:g})"


UpdateRule = Union[FB, ML, RML, ContingentRML, LikelihoodRatio]


def likelihood_cut(C: CredalSet, event: EventLike, level: float) -> CredalSet:
    """``{p in C : p(E) >= level}`` as a credal set.

    Vertices of the cut polytope are the kept vertices of ``C`` plus points
    where edges of ``C`` cross the hyperplane ``p(E) = level``.  Crossing
    points of non-edge segments lie inside the cut and are removed by the
    hull reduction, so every crossing pair of vertices is used.
    """
    V = C.vertices
    pe = C.probabilities(event)
    tol = C.tol
    above = pe >= level - tol
    pts = [V[above]]
    hi_idx = np.flatnonzero(pe > level + tol)
    lo_idx = np.flatnonzero(pe < level - tol)
    for i, j in itertools.product(hi_idx, lo_idx):
        t = (level - pe[j]) / (pe[i] - pe[j])
        pts.append((V[j] + t * (V[i] - V[j]))[None, :])
    return CredalSet(np.vstack(pts), tol)


def retained_set(C: CredalSet, event: EventLike, rule: UpdateRule) -> CredalSet:
    """The subset of priors a rule feeds into Bayes' rule."""
    e = as_event(event)
    lo, hi = event_prob_bounds(C, e)
    if isinstance(rule, ContingentRML):
        rule = RML(rule.alpha_for(e))
    if isinstance(rule, ML):
        if hi <= TAU_NORM:
            raise NotStrictNonnull(f"every prior gives {e!r} probability zero")
        return max_likelihood_face(C, e)
    if isinstance(rule, LikelihoodRatio):
        level = rule.threshold * hi
        if max(level, lo) <= TAU_NORM:
            raise NotStrictNonnull(f"{e!r} has zero probability under a retained prior")
        return C if level <= lo + C.tol else likelihood_cut(C, e, level)
    if isinstance(rule, (FB, RML)):
        if lo <= TAU_NORM:
            raise NotStrictNonnull(f"{e!r} is not strict-nonnull: min p(E) = {lo!r}")
        return C if isinstance(rule, FB) else contract(C, e, rule.alpha)
    raise TypeError(f"not an update rule: {rule!r}")


def update(C: CredalSet, event: EventLike, rule: UpdateRule) -> CredalSet:
    """Posterior credal set given ``event`` under ``rule``."""
    e = as_event(event)
    kept = retained_set(C, e, rule)
    mask = e.mask(C.n_states)
    V = kept.vertices
    post = np.where(mask, V, 0.0) / V[:, mask].sum(axis=1, keepdims=True)
    return CredalSet(post, C.tol)


def meu_value(C: CredalSet, f) -> float:
    """Maxmin expected utility of an act (or row-wise for a matrix of acts)."""
    f = np.asarray(f, dtype=float)
    if f.shape[-1] != C.n_states:
        raise DimensionMismatch(f"act has {f.shape[-1]} entries, credal set has {C.n_states} states")
    vals = f @ C.vertices.T
    return vals.min(axis=-1) if f.ndim > 1 else float(vals.min())


def conditional_ce(C: CredalSet, event: EventLike, rule: UpdateRule, f) -> float:
    """Conditional certainty equivalent (in utils) of ``f`` given ``event``."""
    return meu_value(update(C, event, rule), f)

"""JSON problem files.

A problem file is one JSON object.  Acts are given directly in utility
units, one number per state.  Example::

    {
      "states": ["w1", "w2", "w3"],
      "credal_set": [[0.5, 0, 0.5], [0, 0.5, 0.5], [0.3333, 0.3333, 0.3334]],
      "acts": {"bet": [1, 0, 0]},
      "events": {"E": ["w1", "w2"]},
      "rule": {"name": "RML", "alpha": 0.5},
      "box": [0, 1],
      "seed": 0
    }

``rule`` is one of ``{"name": "FB"}``, ``{"name": "ML"}``,
``{"name": "RML", "alpha": a}``, ``{"name": "LikelihoodRatio", "threshold": t}``
or ``{"name": "ContingentRML", "alphas": {"<event name>": a, ...}}``.
Optional blocks: ``signal_model`` (``beta``, ``lambda1``, ``lambda2``) and
``persuasion`` (``lambdas``, ``alphas``).  Unknown keys are rejected.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

from credal_rml.core import (
    FB,
    ML,
    RML,
    ContingentRML,
    CredalSet,
    Event,
    LikelihoodRatio,
    StateSpace,
    UpdateRule,
)
from credal_rml.errors import CredalError
from credal_rml.signals import SignalModel


class SpecError(ValueError):
    """The problem file is malformed."""


_TOP_KEYS = {"states", "credal_set", "acts", "events", "rule", "signal_model", "persuasion", "box", "seed"}
_REQUIRED = {"states", "credal_set"}
_RULE_KEYS = {"FB": set(), "ML": set(), "RML": {"alpha"}, "LikelihoodRatio": {"threshold"}, "ContingentRML": {"alphas"}}


def _reject_unknown(obj: dict, allowed: set, where: str) -> None:
    extra = sorted(set(obj) - allowed)
    if extra:
        raise SpecError(f"unknown field(s) in {where}: {', '.join(extra)}")


def _number_list(v, where: str) -> list[float]:
    if not isinstance(v, list) or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in v):
        raise SpecError(f"{where} must be a list of numbers")
    return [float(x) for x in v]


def rule_to_dict(rule: UpdateRule, event_names: dict[Event, str] | None = None) -> dict:
    if isinstance(rule, FB):
        return {"name": "FB"}
    if isinstance(rule, ML):
        return {"name": "ML"}
    if isinstance(rule, RML):
        return {"name": "RML", "alpha": rule.alpha}
    if isinstance(rule, LikelihoodRatio):
        return {"name": "LikelihoodRatio", "threshold": rule.threshold}
    names = event_names or {}
    return {"name": "ContingentRML", "alphas": {names.get(e, ",".join(map(str, e))): a for e, a in rule.alphas.items()}}


@dataclass
class ProblemSpec:
    states: StateSpace
    credal_set: CredalSet
    acts: dict[str, np.ndarray] = field(default_factory=dict)
    events: dict[str, Event] = field(default_factory=dict)
    rule: UpdateRule = field(default_factory=FB)
    signal_model: SignalModel | None = None
    persuasion: dict | None = None
    box: tuple[float, float] | None = None
    seed: int = 0

    def event(self, name: str) -> Event:
        try:
            return self.events[name]
        except KeyError:
            known = ", ".join(sorted(self.events)) or "none"
            raise SpecError(f"events: no event named {name!r} (known: {known})") from None

    # -- parsing -----------------------------------------------------------

    @classmethod
    def from_dict(cls, d: Any) -> "ProblemSpec":
        if not isinstance(d, dict):
            raise SpecError("a problem spec must be a JSON object")
        _reject_unknown(d, _TOP_KEYS, "spec")
        missing = sorted(_REQUIRED - set(d))
        if missing:
            raise SpecError(f"missing field(s): {', '.join(missing)}")
        try:
            if not isinstance(d["states"], list):
                raise SpecError("states must be a list of labels")
            states = StateSpace(tuple(d["states"]))
            pts = d["credal_set"]
            if not isinstance(pts, list) or not pts:
                raise SpecError("credal_set must be a nonempty list of priors")
            rows = [_number_list(p, "credal_set entry") for p in pts]
            if any(len(r) != len(states) for r in rows):
                raise SpecError(f"credal_set: every prior needs {len(states)} entries")
            C = CredalSet(rows)

            acts = {}
            raw_acts = d.get("acts", {})
            if not isinstance(raw_acts, dict):
                raise SpecError("acts must map names to utility vectors")
            for name, v in raw_acts.items():
                vec = _number_list(v, f"acts.{name}")
                if len(vec) != len(states):
                    raise SpecError(f"acts.{name} needs {len(states)} entries")
                acts[name] = np.array(vec)

            events = {}
            raw_events = d.get("events", {})
            if not isinstance(raw_events, dict):
                raise SpecError("events must map names to lists of state labels")
            for name, labels in raw_events.items():
                if not isinstance(labels, list) or not labels:
                    raise SpecError(f"events.{name} must be a nonempty list of state labels")
                try:
                    events[name] = states.event(labels)
                except KeyError as exc:
                    raise SpecError(f"events.{name}: {exc.args[0]}") from None

            rule = cls._parse_rule(d.get("rule", {"name": "FB"}), events)

            sm = d.get("signal_model")
            signal_model = None
            if sm is not None:
                if not isinstance(sm, dict):
                    raise SpecError("signal_model must be an object")
                _reject_unknown(sm, {"beta", "lambda1", "lambda2"}, "signal_model")
                signal_model = SignalModel(float(sm["beta"]), float(sm["lambda1"]), float(sm["lambda2"]))

            pers = d.get("persuasion")
            if pers is not None:
                if not isinstance(pers, dict):
                    raise SpecError("persuasion must be an object")
                _reject_unknown(pers, {"lambdas", "alphas"}, "persuasion")
                pers = {k: _number_list(pers[k], f"persuasion.{k}") for k in ("lambdas", "alphas") if k in pers}

            box = d.get("box")
            if box is not None:
                box = tuple(_number_list(box, "box"))
                if len(box) != 2 or not box[0] < box[1]:
                    raise SpecError("box must be [low, high] with low < high")

            seed = d.get("seed", 0)
            if not isinstance(seed, int) or isinstance(seed, bool):
                raise SpecError("seed must be an integer")
        except KeyError as exc:
            raise SpecError(f"missing field {exc.args[0]!r}") from None
        except SpecError:
            raise
        except (CredalError, ValueError, TypeError) as exc:
            raise SpecError(str(exc)) from exc
        return cls(states, C, acts, events, rule, signal_model, pers, box, seed)

    @staticmethod
    def _parse_rule(r: Any, events: dict[str, Event]) -> UpdateRule:
        if not isinstance(r, dict) or "name" not in r:
            raise SpecError("rule must be an object with a 'name'")
        name = r["name"]
        if name not in _RULE_KEYS:
            raise SpecError(f"rule: unknown rule {name!r} (known: {', '.join(_RULE_KEYS)})")
        _reject_unknown(r, _RULE_KEYS[name] | {"name"}, "rule")
        missing = _RULE_KEYS[name] - set(r)
        if missing:
            raise SpecError(f"rule {name} needs {', '.join(sorted(missing))}")
        if name == "FB":
            return FB()
        if name == "ML":
            return ML()
        if name == "RML":
            return RML(float(r["alpha"]))
        if name == "LikelihoodRatio":
            return LikelihoodRatio(float(r["threshold"]))
        alphas = r["alphas"]
        if not isinstance(alphas, dict):
            raise SpecError("rule.alphas must map event names to weights")
        out = {}
        for ev, a in alphas.items():
            if ev not in events:
                raise SpecError(f"rule.alphas: no event named {ev!r} in events")
            out[events[ev]] = float(a)
        return ContingentRML(out)

    @classmethod
    def from_json(cls, text: str) -> "ProblemSpec":
        try:
            d = json.loads(text)
        except json.JSONDecodeError as exc:
            raise SpecError(f"invalid JSON: {exc}") from None
        return cls.from_dict(d)

    @classmethod
    def load(cls, path: str | Path) -> "ProblemSpec":
        try:
            text = Path(path).read_text()
        except OSError as exc:
            raise SpecError(f"cannot read {path}: {exc.strerror}") from None
        return cls.from_json(text)

    # -- serialization -----------------------------------------------------

    def to_dict(self) -> dict:
        labels = self.states.labels
        names = {e: n for n, e in self.events.items()}
        d: dict[str, Any] = {
            "states": list(labels),
            "credal_set": self.credal_set.to_list(),
            "acts": {k: v.tolist() for k, v in sorted(self.acts.items())},
            "events": {k: [labels[i] for i in e] for k, e in sorted(self.events.items())},
            "rule": rule_to_dict(self.rule, names),
        }
        if self.signal_model is not None:
            m = self.signal_model
            d["signal_model"] = {"beta": m.beta, "lambda1": m.lambda1, "lambda2": m.lambda2}
        if self.persuasion is not None:
            d["persuasion"] = dict(self.persuasion)
        if self.box is not None:
            d["box"] = list(self.box)
        d["seed"] = self.seed
        return d

    def to_json(self, indent: int | None = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent)

"""Scenario configuration files.

A scenario is a YAML document with five blocks::

    name: table1
    seed: 7
    runs: 10
    topology:            # grid -> domain -> entities
      G1:
        D1: [A, B, C, D]
    entities:            # per-entity behaviour and ground-truth quality
      defaults: {behavior: honest, noise_sigma: 0.2}
      A: {quality: 1.9}
      E: {behavior: inverter, quality: 0.6}
    parameters:          # flat scalars, every one overridable from the CLI
      mu: 3.0
      eta: 2.2
    schedule:
      warmup_rounds: 50
      evaluations: [B->I, C->E]

Unknown keys are rejected. ``validate`` reports every violation at once.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace
from importlib import resources
from pathlib import Path
from typing import Any, Mapping

import yaml

from gridtrust.credibility import CredibilityWeights
from gridtrust.engine import AggregationWeights, DecayMode, EngineParams, RatingScale, Stance, Thresholds
from gridtrust.errors import ConfigError
from gridtrust.purge import PurgePolicy
from gridtrust.topology import Topology


class BehaviorKind(enum.Enum):
    HONEST = "honest"
    INVERTER = "inverter"
    RANDOM_LIAR = "random_liar"


@dataclass(frozen=True)
class BehaviorModel:
    """How an entity rates a provider whose true quality is ``truth``."""

    kind: BehaviorKind = BehaviorKind.HONEST
    noise_sigma: float = 0.2
    seed: int = 0

    def rate(self, truth: float, rng, mu: float) -> float:
        if self.kind is BehaviorKind.INVERTER:
            return mu - truth
        if self.kind is BehaviorKind.RANDOM_LIAR:
            return float(rng.uniform(0.0, mu))
        noisy = truth + rng.normal(0.0, self.noise_sigma) if self.noise_sigma > 0 else truth
        return float(min(max(noisy, 0.0), mu))

    @property
    def malicious(self) -> bool:
        return self.kind is not BehaviorKind.HONEST


# name -> (type, default). Types drive override parsing.
PARAMETERS: dict[str, tuple[type, Any]] = {
    "mu": (float, 3.0),
    "w1": (float, 0.5),
    "w2": (float, 0.3),
    "w3": (float, 0.2),
    "v1": (float, 0.5),
    "v2": (float, 0.3),
    "v3": (float, 0.2),
    "v_other1": (float, None),
    "v_other2": (float, None),
    "v_other3": (float, None),
    "eta": (float, 2.2),
    "xi": (float, 1.8),
    "stance": (Stance, Stance.PARANOID),
    "alpha": (float, 0.5),
    "activity_window": (float, 1.0),
    "decay_mode": (DecayMode, DecayMode.INTENT),
    "theta": (float, 0.0),
    "min_overlap": (int, 3),
    "quarantine_months": (float, 3.0),
    "malicious_bad_providers": (bool, False),
    "bad_provider_quality": (float, 0.3),
}

SCHEDULE: dict[str, tuple[type, Any]] = {
    "warmup_rounds": (int, 50),
    "interactions_per_round": (int, 40),
    "tick_months": (float, 0.05),
    "random_evaluations": (int, 10),
}

TOP_LEVEL: dict[str, tuple[type, Any]] = {
    "seed": (int, 0),
    "runs": (int, 1),
}

ENTITY_KEYS = {"behavior", "quality", "noise_sigma", "seed"}


@dataclass(frozen=True)
class Schedule:
    warmup_rounds: int = 50
    interactions_per_round: int = 40
    tick_months: float = 0.05
    # scripted (initiator, provider) evaluations; None means sample randomly
    evaluations: tuple[tuple[str, str], ...] | None = None
    random_evaluations: int = 10


@dataclass(frozen=True)
class ScenarioConfig:
    topology: Topology
    behaviors: Mapping[str, BehaviorModel]
    quality: Mapping[str, float]
    engine: EngineParams = field(default_factory=EngineParams)
    purge: PurgePolicy = field(default_factory=PurgePolicy)
    schedule: Schedule = field(default_factory=Schedule)
    runs: int = 1
    seed: int = 0
    malicious_bad_providers: bool = False
    bad_provider_quality: float = 0.3
    name: str = "scenario"

    @property
    def malicious(self) -> frozenset[str]:
        return frozenset(e for e, b in self.behaviors.items() if b.malicious)

    def effective_quality(self) -> dict[str, float]:
        """Ground-truth quality after the bad-provider switch is applied."""
        q = dict(self.quality)
        if self.malicious_bad_providers:
            for e in self.malicious:
                q[e] = self.bad_provider_quality
        return q

    def all_honest(self) -> "ScenarioConfig":
        """Same scenario with every entity honest (keeps per-entity noise and seeds)."""
        honest = {
            e: replace(b, kind=BehaviorKind.HONEST) if b.malicious else b for e, b in self.behaviors.items()
        }
        return replace(self, behaviors=honest, name=f"{self.name}-honest")


# -- parsing ------------------------------------------------------------------


def _coerce(key: str, kind: type, value: Any) -> Any:
    if value is None:
        return None
    if isinstance(kind, type) and issubclass(kind, enum.Enum):
        if isinstance(value, kind):
            return value
        try:
            return kind(str(value).lower())
        except ValueError:
            choices = ", ".join(m.value for m in kind)
            raise ValueError(f"{key} must be one of {choices}, got {value!r}") from None
    if kind is bool:
        if isinstance(value, bool):
            return value
        text = str(value).strip().lower()
        if text in ("true", "yes", "1", "on"):
            return True
        if text in ("false", "no", "0", "off"):
            return False
        raise ValueError(f"{key} must be a boolean, got {value!r}")
    if kind is int:
        if isinstance(value, bool) or (isinstance(value, float) and not value.is_integer()):
            raise ValueError(f"{key} must be an integer, got {value!r}")
        try:
            return int(str(value)) if isinstance(value, str) else int(value)
        except ValueError:
            raise ValueError(f"{key} must be an integer, got {value!r}") from None
    if kind is float:
        if isinstance(value, bool):
            raise ValueError(f"{key} must be a number, got {value!r}")
        try:
            return float(value)
        except (TypeError, ValueError):
            raise ValueError(f"{key} must be a number, got {value!r}") from None
    return value


def _parse_pair(item: Any) -> tuple[str, str]:
    if isinstance(item, str):
        for sep in ("->", ",", " "):
            if sep in item:
                a, b = (part.strip() for part in item.split(sep, 1))
                return a, b
        raise ValueError(f"cannot parse evaluation {item!r}; use 'A->B'")
    a, b = item
    return str(a), str(b)


def apply_overrides(raw: dict, overrides: Mapping[str, Any] | list[str]) -> dict:
    """Return a copy of ``raw`` with ``key=value`` overrides applied and type-checked."""
    if not isinstance(overrides, Mapping):
        parsed = {}
        for item in overrides:
            if "=" not in item:
                raise ConfigError([("override.syntax", f"override {item!r} is not key=value")])
            key, value = item.split("=", 1)
            parsed[key.strip()] = value.strip()
        overrides = parsed
    out = dict(raw)
    out["parameters"] = dict(raw.get("parameters") or {})
    out["schedule"] = dict(raw.get("schedule") or {})
    problems = []
    for key, value in overrides.items():
        for block, table in (("parameters", PARAMETERS), ("schedule", SCHEDULE), (None, TOP_LEVEL)):
            if key in table:
                try:
                    coerced = _coerce(key, table[key][0], value)
                except ValueError as exc:
                    problems.append((f"override.{key}", str(exc)))
                    break
                if isinstance(coerced, enum.Enum):
                    coerced = coerced.value
                if block is None:
                    out[key] = coerced
                else:
                    out[block][key] = coerced
                break
        else:
            problems.append(("override.unknown", f"unknown parameter {key!r}"))
    if problems:
        raise ConfigError(problems)
    return out


def _read_block(raw: Mapping, block: str | None, table: dict, problems: list) -> dict[str, Any]:
    src = raw if block is None else (raw.get(block) or {})
    if not isinstance(src, Mapping):
        problems.append((f"{block}.type", f"{block} block must be a mapping"))
        return {k: d for k, (_, d) in table.items()}
    values = {}
    for key, (kind, default) in table.items():
        try:
            values[key] = _coerce(key, kind, src.get(key, default))
        except ValueError as exc:
            problems.append((f"{block or 'config'}.{key}", str(exc)))
            values[key] = default
    if block is not None:
        extra = set(src) - set(table) - ({"evaluations"} if block == "schedule" else set())
        for key in sorted(extra):
            problems.append((f"{block}.unknown", f"unknown key {key!r} in {block} block"))
    return values


def _collect(problems: list, build):
    try:
        return build()
    except ConfigError as exc:
        problems.extend(exc.violations)
        return None


def build_config(raw: Mapping) -> ScenarioConfig:
    """Validate a parsed document and build a ScenarioConfig, reporting all violations."""
    problems: list[tuple[str, str]] = []
    if not isinstance(raw, Mapping):
        raise ConfigError([("config.type", "scenario file must contain a mapping")])
    known = {"name", "topology", "entities", "parameters", "schedule"} | set(TOP_LEVEL)
    for key in sorted(set(raw) - known):
        problems.append(("config.unknown", f"unknown top-level key {key!r}"))

    top = _read_block(raw, None, TOP_LEVEL, problems)
    params = _read_block(raw, "parameters", PARAMETERS, problems)
    sched = _read_block(raw, "schedule", SCHEDULE, problems)

    layout = raw.get("topology")
    topology = None
    if not isinstance(layout, Mapping) or not layout:
        problems.append(("topology.empty", "topology block must define at least one grid"))
    else:
        topology = _collect(problems, lambda: Topology.from_nested(layout))
        if topology is not None and len(topology) == 0:
            problems.append(("topology.empty", "topology places no entities"))

    # entities
    ent_block = raw.get("entities") or {}
    defaults = dict(ent_block.get("defaults") or {})
    behaviors: dict[str, BehaviorModel] = {}
    quality: dict[str, float] = {}
    placed = list(topology.entities) if topology is not None else []
    for name in ent_block:
        if name != "defaults" and str(name) not in placed:
            problems.append(("entity.unplaced", f"entity {name!r} is not placed in any domain"))
    mu = params["mu"] if isinstance(params["mu"], float) else 3.0
    for idx, ent in enumerate(placed):
        spec = {**defaults, **(ent_block.get(ent) or {})}
        for key in sorted(set(spec) - ENTITY_KEYS):
            problems.append(("entity.unknown", f"unknown key {key!r} for entity {ent!r}"))
        try:
            kind = _coerce("behavior", BehaviorKind, spec.get("behavior", "honest"))
            sigma = _coerce("noise_sigma", float, spec.get("noise_sigma", 0.2))
            seed = _coerce("seed", int, spec.get("seed", idx))
            q = _coerce("quality", float, spec.get("quality"))
        except ValueError as exc:
            problems.append(("entity.value", f"entity {ent!r}: {exc}"))
            continue
        if q is None:
            problems.append(("entity.quality", f"entity {ent!r} has no ground-truth quality"))
            continue
        if not 0.0 <= q <= mu:
            problems.append(("entity.quality", f"entity {ent!r} quality {q} outside [0, {mu}]"))
        if sigma < 0:
            problems.append(("entity.noise_sigma", f"entity {ent!r} noise_sigma must be non-negative"))
        behaviors[ent] = BehaviorModel(kind, sigma, seed)
        quality[ent] = q

    # engine pieces, each validated independently so every violation is reported
    scale = _collect(problems, lambda: RatingScale(params["mu"]))
    weights = _collect(problems, lambda: AggregationWeights(params["w1"], params["w2"], params["w3"]))
    cred = _collect(problems, lambda: CredibilityWeights(params["v1"], params["v2"], params["v3"]))
    other = [params["v_other1"], params["v_other2"], params["v_other3"]]
    cred_other = None
    if any(x is not None for x in other):
        if any(x is None for x in other):
            problems.append(("credibility.v_other", "v_other1..3 must be given together"))
        else:
            cred_other = _collect(problems, lambda: CredibilityWeights(*other))
    thresholds = _collect(problems, lambda: Thresholds(params["eta"], params["xi"], params["stance"]))
    policy = _collect(
        problems, lambda: PurgePolicy(params["theta"], params["min_overlap"], params["quarantine_months"])
    )
    engine = None
    if None not in (scale, weights, cred, thresholds):
        engine = _collect(
            problems,
            lambda: EngineParams(
                scale=scale,
                weights=weights,
                cred=cred,
                cred_other=cred_other,
                thresholds=thresholds,
                alpha=params["alpha"],
                activity_window=params["activity_window"],
                decay_mode=params["decay_mode"],
            ),
        )
    if not 0.0 <= params["bad_provider_quality"] <= mu:
        problems.append(("parameters.bad_provider_quality", f"bad_provider_quality outside [0, {mu}]"))

    # schedule
    if sched["warmup_rounds"] < 0:
        problems.append(("schedule.warmup_rounds", "warmup_rounds must be non-negative"))
    if sched["interactions_per_round"] < 0:
        problems.append(("schedule.interactions_per_round", "interactions_per_round must be non-negative"))
    if not sched["tick_months"] > 0:
        problems.append(("schedule.tick_months", "tick_months must be positive"))
    if sched["random_evaluations"] < 0:
        problems.append(("schedule.random_evaluations", "random_evaluations must be non-negative"))
    evaluations = None
    raw_evals = (raw.get("schedule") or {}).get("evaluations") if isinstance(raw.get("schedule"), Mapping) else None
    if raw_evals is not None:
        evaluations = []
        for item in raw_evals:
            try:
                a, b = _parse_pair(item)
            except (ValueError, TypeError) as exc:
                problems.append(("schedule.evaluations", str(exc)))
                continue
            for e in (a, b):
                if e not in placed:
                    problems.append(("entity.unplaced", f"evaluation {a}->{b} refers to unplaced entity {e!r}"))
            if a == b:
                problems.append(("schedule.self_pair", f"evaluation {a}->{b} pairs an entity with itself"))
            evaluations.append((a, b))
        evaluations = tuple(evaluations)
    if len(placed) < 2:
        problems.append(("topology.size", "scenario needs at least two entities"))

    if top["runs"] is not None and top["runs"] < 1:
        problems.append(("config.runs", f"runs must be at least 1, got {top['runs']}"))

    if problems:
        raise ConfigError(problems)
    return ScenarioConfig(
        topology=topology,
        behaviors=behaviors,
        quality=quality,
        engine=engine,
        purge=policy,
        schedule=Schedule(
            warmup_rounds=sched["warmup_rounds"],
            interactions_per_round=sched["interactions_per_round"],
            tick_months=sched["tick_months"],
            evaluations=evaluations,
            random_evaluations=sched["random_evaluations"],
        ),
        runs=top["runs"],
        seed=top["seed"],
        malicious_bad_providers=params["malicious_bad_providers"],
        bad_provider_quality=params["bad_provider_quality"],
        name=str(raw.get("name", "scenario")),
    )


def read_raw(path: str | Path) -> dict:
    with open(path) as fh:
        try:
            doc = yaml.safe_load(fh)
        except yaml.YAMLError as exc:
            raise ConfigError([("config.syntax", f"{path}: {exc}")]) from None
    if not isinstance(doc, dict):
        raise ConfigError([("config.type", f"{path}: scenario file must contain a mapping")])
    return doc


def load_config(path: str | Path, overrides: Mapping[str, Any] | list[str] = ()) -> ScenarioConfig:
    raw = read_raw(path)
    return build_config(apply_overrides(raw, overrides) if overrides else raw)


def bundled_path(name: str = "table1") -> Path:
    return Path(str(resources.files("gridtrust") / "scenarios" / f"{name}.yaml"))


def load_bundled(name: str = "table1", overrides: Mapping[str, Any] | list[str] = ()) -> ScenarioConfig:
    return load_config(bundled_path(name), overrides)

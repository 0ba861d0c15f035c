"""Experiment configuration: strict JSON parsing and validation.

Unknown keys are rejected, every structural error names the offending
field, and resource caps are enforced here rather than mid-run.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

from .engine import STATE_SIZE_CAP, MEASURE_GRANULARITIES, SECOND_TRANSFORMS
from .errors import ConfigError, ResourceCapError
from .groups import FiniteGroup, ProductGroup, Subgroup, group_from_spec
from .representations import BasisOrdering
from .transversals import PERIOD_STATE_CAP

EXPERIMENTS = (
    "simulate",
    "simon",
    "shor",
    "sweep-transversal",
    "irreps",
    "fourier-check",
    "recover",
)

TRANSVERSAL_KINDS = ("shor", "offset")

_COMMON_KEYS = {"experiment", "seed"}
_ALLOWED_KEYS = {
    "simulate": _COMMON_KEYS
    | {"group", "hidden_generators", "oracle_seed", "trials", "second_transform",
       "measure_granularity", "ordering"},
    "simon": _COMMON_KEYS | {"group", "hidden_generators", "oracle_seed", "trials"},
    "shor": _COMMON_KEYS | {"N", "a", "Q", "transversal", "trials", "allow_any_q",
                            "second_transform"},
    "sweep-transversal": _COMMON_KEYS | {"N", "a", "Q", "bound", "seeds", "allow_any_q"},
    "irreps": _COMMON_KEYS | {"group"},
    "fourier-check": _COMMON_KEYS | {"group", "ordering"},
    "recover": _COMMON_KEYS | {"group", "dist", "second_transform", "measure_granularity",
                               "oracle_seed"},
}
_REQUIRED_KEYS = {
    "simulate": {"group", "hidden_generators"},
    "simon": {"group", "hidden_generators"},
    "shor": {"N", "a", "Q"},
    "sweep-transversal": {"N", "a", "Q", "bound", "seeds"},
    "irreps": {"group"},
    "fourier-check": {"group"},
    "recover": {"group", "dist"},
}


@dataclass(frozen=True)
class TransversalSpec:
    kind: str = "shor"
    bound: int = 1


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str
    group: str | None = None
    hidden_generators: tuple = ()
    seed: int = 0
    oracle_seed: int | None = None
    trials: int = 0
    modulus: int | None = None
    base: int | None = None
    big_q: int | None = None
    transversal: TransversalSpec | None = None
    allow_any_q: bool = False
    second_transform: str = "forward"
    measure_granularity: str = "full_triple"
    ordering: str = BasisOrdering.DIM_THEN_LABEL.value
    bound: int | None = None
    seeds: int | None = None
    dist: str | None = None

    def resolved_oracle_seed(self) -> int:
        return self.seed if self.oracle_seed is None else self.oracle_seed


def _require_int(raw: dict, key: str, minimum: int | None = None) -> int:
    value = raw[key]
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"field {key!r} must be an integer, got {value!r}")
    if minimum is not None and value < minimum:
        raise ConfigError(f"field {key!r} must be at least {minimum}, got {value}")
    return value


def _normalize_generators(raw_gens) -> tuple:
    if not isinstance(raw_gens, list):
        raise ConfigError("field 'hidden_generators' must be a list")
    out = []
    for g in raw_gens:
        if isinstance(g, bool):
            raise ConfigError(f"field 'hidden_generators' has invalid entry {g!r}")
        if isinstance(g, int):
            out.append(g)
        elif isinstance(g, list) and all(isinstance(x, int) and not isinstance(x, bool) for x in g):
            out.append(tuple(g))
        else:
            raise ConfigError(f"field 'hidden_generators' has invalid entry {g!r}")
    return tuple(out)


def resolve_group(cfg: ExperimentConfig) -> FiniteGroup:
    try:
        return group_from_spec(cfg.group)
    except ValueError as exc:
        raise ConfigError(f"field 'group': {exc}") from exc


def resolve_hidden(cfg: ExperimentConfig, group: FiniteGroup) -> Subgroup:
    """Generator entries are element indices, or coordinate tuples for products."""
    indices = []
    for g in cfg.hidden_generators:
        if isinstance(g, tuple):
            if not isinstance(group, ProductGroup):
                raise ConfigError(
                    f"field 'hidden_generators': coordinate entry {list(g)!r} "
                    f"needs a product group, got {group.name}"
                )
            try:
                indices.append(group.index_of(g))
            except ValueError as exc:
                raise ConfigError(f"field 'hidden_generators': {exc}") from exc
        else:
            try:
                indices.append(group.check_index(g))
            except ValueError as exc:
                raise ConfigError(f"field 'hidden_generators': {exc}") from exc
    return Subgroup.from_generators(group, indices)


def config_from_dict(raw: dict) -> ExperimentConfig:
    if not isinstance(raw, dict):
        raise ConfigError("configuration must be a JSON object")
    experiment = raw.get("experiment")
    if experiment not in EXPERIMENTS:
        raise ConfigError(
            f"field 'experiment' must be one of {list(EXPERIMENTS)}, got {experiment!r}"
        )
    allowed = _ALLOWED_KEYS[experiment]
    unknown = sorted(set(raw) - allowed)
    if unknown:
        raise ConfigError(f"unknown field {unknown[0]!r} for experiment {experiment!r}")
    missing = sorted(_REQUIRED_KEYS[experiment] - set(raw))
    if missing:
        raise ConfigError(f"missing field {missing[0]!r} for experiment {experiment!r}")

    kwargs: dict = {"experiment": experiment}
    if "seed" in raw:
        kwargs["seed"] = _require_int(raw, "seed")
    if "oracle_seed" in raw:
        kwargs["oracle_seed"] = _require_int(raw, "oracle_seed")
    if "trials" in raw:
        kwargs["trials"] = _require_int(raw, "trials", minimum=0)
    if "group" in raw:
        if not isinstance(raw["group"], str):
            raise ConfigError(f"field 'group' must be a string, got {raw['group']!r}")
        kwargs["group"] = raw["group"]
    if "hidden_generators" in raw:
        kwargs["hidden_generators"] = _normalize_generators(raw["hidden_generators"])
    if "N" in raw:
        kwargs["modulus"] = _require_int(raw, "N", minimum=2)
    if "a" in raw:
        kwargs["base"] = _require_int(raw, "a", minimum=1)
    if "Q" in raw:
        kwargs["big_q"] = _require_int(raw, "Q", minimum=1)
    if "allow_any_q" in raw:
        if not isinstance(raw["allow_any_q"], bool):
            raise ConfigError("field 'allow_any_q' must be a boolean")
        kwargs["allow_any_q"] = raw["allow_any_q"]
    if "second_transform" in raw:
        if raw["second_transform"] not in SECOND_TRANSFORMS:
            raise ConfigError(
                f"field 'second_transform' must be one of {list(SECOND_TRANSFORMS)}"
            )
        kwargs["second_transform"] = raw["second_transform"]
    if "measure_granularity" in raw:
        if raw["measure_granularity"] not in MEASURE_GRANULARITIES:
            raise ConfigError(
                f"field 'measure_granularity' must be one of {list(MEASURE_GRANULARITIES)}"
            )
        kwargs["measure_granularity"] = raw["measure_granularity"]
    if "ordering" in raw:
        try:
            kwargs["ordering"] = BasisOrdering(raw["ordering"]).value
        except ValueError as exc:
            raise ConfigError(
                f"field 'ordering' must be one of {[o.value for o in BasisOrdering]}"
            ) from exc
    if "transversal" in raw:
        spec = raw["transversal"]
        if not isinstance(spec, dict):
            raise ConfigError("field 'transversal' must be an object")
        unknown = sorted(set(spec) - {"kind", "bound"})
        if unknown:
            raise ConfigError(f"unknown field 'transversal.{unknown[0]}'")
        kind = spec.get("kind", "shor")
        if kind not in TRANSVERSAL_KINDS:
            raise ConfigError(
                f"field 'transversal.kind' must be one of {list(TRANSVERSAL_KINDS)}"
            )
        bound = spec.get("bound", 1)
        if isinstance(bound, bool) or not isinstance(bound, int) or bound < 1:
            raise ConfigError("field 'transversal.bound' must be a positive integer")
        kwargs["transversal"] = TransversalSpec(kind, bound)
    if "bound" in raw:
        kwargs["bound"] = _require_int(raw, "bound", minimum=1)
    if "seeds" in raw:
        kwargs["seeds"] = _require_int(raw, "seeds", minimum=1)
    if "dist" in raw:
        if not isinstance(raw["dist"], str):
            raise ConfigError("field 'dist' must be a path string")
        kwargs["dist"] = raw["dist"]

    cfg = ExperimentConfig(**kwargs)
    _validate_semantics(cfg)
    return cfg


def _validate_semantics(cfg: ExperimentConfig) -> None:
    if cfg.experiment in ("simulate", "simon", "irreps", "fourier-check", "recover"):
        group = resolve_group(cfg)
        if cfg.experiment == "simon":
            if not isinstance(group, ProductGroup) or any(m != 2 for m in group.moduli):
                raise ConfigError(
                    f"field 'group': simon needs a Z2^n group, got {cfg.group!r}"
                )
        if cfg.experiment in ("simulate", "simon"):
            hidden = resolve_hidden(cfg, group)
            state = group.order * hidden.num_cosets
            if state > STATE_SIZE_CAP:
                raise ResourceCapError(
                    f"state size {group.order}*{hidden.num_cosets} exceeds {STATE_SIZE_CAP}"
                )
        if cfg.experiment == "recover" and group.order > 32:
            raise ResourceCapError(
                f"recover ranks all subgroups and is capped at order 32, "
                f"got {cfg.group!r} of order {group.order}"
            )
    if cfg.experiment in ("shor", "sweep-transversal"):
        if math.gcd(cfg.base, cfg.modulus) != 1:
            raise ConfigError(
                f"field 'a': gcd({cfg.base}, {cfg.modulus}) != 1, base must be coprime"
            )
        if not cfg.allow_any_q and cfg.big_q & (cfg.big_q - 1):
            raise ConfigError(
                f"field 'Q': {cfg.big_q} is not a power of two (set allow_any_q to override)"
            )
        if cfg.big_q * cfg.modulus > PERIOD_STATE_CAP:
            raise ResourceCapError(
                f"state size {cfg.big_q}*{cfg.modulus} exceeds {PERIOD_STATE_CAP}"
            )


def parse_config(text: str) -> ExperimentConfig:
    """Parse and validate a JSON experiment configuration."""
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"configuration is not valid JSON: {exc}") from exc
    return config_from_dict(raw)


def config_to_dict(cfg: ExperimentConfig) -> dict:
    """Canonical JSON-ready form; round-trips through config_from_dict."""
    out: dict = {"experiment": cfg.experiment, "seed": cfg.seed}
    if cfg.group is not None:
        out["group"] = cfg.group
    if cfg.experiment in ("simulate", "simon"):
        out["hidden_generators"] = [
            list(g) if isinstance(g, tuple) else g for g in cfg.hidden_generators
        ]
        if cfg.oracle_seed is not None:
            out["oracle_seed"] = cfg.oracle_seed
        out["trials"] = cfg.trials
    if cfg.experiment in ("shor", "sweep-transversal"):
        out["N"] = cfg.modulus
        out["a"] = cfg.base
        out["Q"] = cfg.big_q
        if cfg.allow_any_q:
            out["allow_any_q"] = True
    if cfg.experiment == "shor":
        spec = cfg.transversal or TransversalSpec()
        out["transversal"] = {"kind": spec.kind, "bound": spec.bound}
        out["trials"] = cfg.trials
        out["second_transform"] = cfg.second_transform
    if cfg.experiment == "sweep-transversal":
        out["bound"] = cfg.bound
        out["seeds"] = cfg.seeds
    if cfg.experiment == "simulate":
        out["second_transform"] = cfg.second_transform
        out["measure_granularity"] = cfg.measure_granularity
        out["ordering"] = cfg.ordering
    if cfg.experiment == "fourier-check":
        out["ordering"] = cfg.ordering
    if cfg.experiment == "recover":
        out["dist"] = cfg.dist
        out["second_transform"] = cfg.second_transform
        out["measure_granularity"] = cfg.measure_granularity
        if cfg.oracle_seed is not None:
            out["oracle_seed"] = cfg.oracle_seed
    return out


def serialize_config(cfg: ExperimentConfig) -> str:
    return json.dumps(config_to_dict(cfg), sort_keys=True, indent=2) + "\n"

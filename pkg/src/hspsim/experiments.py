"""Experiment orchestration: run a validated config, emit reproducible reports.

A report is fully determined by its configuration bytes: runs never
record timestamps, and all randomness flows from the config seeds.
"""

from __future__ import annotations

import platform
from pathlib import Path

import numpy as np

from . import __version__
from .config import ExperimentConfig, TransversalSpec, config_to_dict, resolve_group, resolve_hidden
from .engine import PipelineConfig, run_pipeline, sample, step_trace
from .errors import ConfigError
from .groups import Subgroup
from .oracle import build_instance, classical_brute_force_hsp
from .recovery import (
    SampleSet,
    period_from_samples,
    simon_solve,
    subgroup_consistency_rank,
)
from .reporting import (
    fmt17,
    label_str,
    read_distribution_csv,
    write_distribution_csv,
    write_f_table_csv,
    write_json,
    write_samples_csv,
)
from .representations import BasisOrdering, fourier_operator, irreps_of, verify_representation_suite
from .transversals import (
    PeriodicInstance,
    offset_transversal,
    peak_mass,
    shor_pipeline,
    shor_transversal,
    transversal_quality_sweep,
)


def _versions() -> dict:
    return {
        "hspsim": __version__,
        "numpy": np.__version__,
        "python": platform.python_version(),
    }


def _base_report(cfg: ExperimentConfig) -> dict:
    return {"config": config_to_dict(cfg), "seed": cfg.seed, "versions": _versions()}


def run_experiment(cfg: ExperimentConfig, out_dir: str | Path = ".") -> dict:
    """Execute one experiment, write its artifacts, and return the report."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    handlers = {
        "irreps": _run_irreps,
        "fourier-check": _run_fourier_check,
        "simulate": _run_simulate,
        "simon": _run_simon,
        "shor": _run_shor,
        "sweep-transversal": _run_sweep,
        "recover": _run_recover,
    }
    report = _base_report(cfg)
    report.update(handlers[cfg.experiment](cfg, out))
    write_json(out / "report.json", report)
    return report


def _run_irreps(cfg: ExperimentConfig, out: Path) -> dict:
    group = resolve_group(cfg)
    table = []
    for ir in irreps_of(group):
        chars = ir.character()
        table.append(
            {
                "label": ir.label,
                "dim": ir.dim,
                "characters": [[float(c.real), float(c.imag)] for c in chars],
            }
        )
    payload = {
        "group": group.name,
        "elements": [group.label(g) for g in range(group.order)],
        "irreps": table,
    }
    write_json(out / "irreps.json", payload)
    return payload


def _run_fourier_check(cfg: ExperimentConfig, out: Path) -> dict:
    group = resolve_group(cfg)
    suite = verify_representation_suite(group)
    fourier = fourier_operator(group, BasisOrdering(cfg.ordering))
    return {
        "group": group.name,
        "ordering": cfg.ordering,
        "completeness_defect": int(suite["completeness_defect"]),
        "max_schur_residual": suite["max_schur_residual"],
        "max_unitarity_residual": max(
            suite["max_unitarity_residual"], fourier.max_unitarity_residual()
        ),
    }


def _pipeline_pieces(cfg: ExperimentConfig):
    group = resolve_group(cfg)
    hidden = resolve_hidden(cfg, group)
    instance = build_instance(group, hidden, cfg.resolved_oracle_seed())
    fourier = fourier_operator(group, BasisOrdering(cfg.ordering))
    pipeline_cfg = PipelineConfig(cfg.second_transform, cfg.measure_granularity)
    return group, hidden, instance, fourier, pipeline_cfg


def _run_simulate(cfg: ExperimentConfig, out: Path) -> dict:
    group, hidden, instance, fourier, pipeline_cfg = _pipeline_pieces(cfg)
    dist = run_pipeline(instance, fourier, pipeline_cfg)
    norms = [state.norm() for state in step_trace(instance, fourier, pipeline_cfg)]
    samples = sample(dist, cfg.trials, cfg.seed)
    write_distribution_csv(out / "distribution.csv", dist)
    write_samples_csv(out / "samples.csv", samples)
    write_f_table_csv(out / "f_table.csv", instance)
    return {
        "group": group.name,
        "hidden_elements": [group.label(g) for g in hidden.elements],
        "hidden_is_normal": hidden.normal,
        "distribution": [[label_str(l), float(p)] for l, p in zip(dist.labels, dist.probs)],
        "samples": [label_str(l) for l in samples],
        "norms": norms,
        "paths": {
            "distribution": "distribution.csv",
            "samples": "samples.csv",
            "f_table": "f_table.csv",
        },
    }


def _run_simon(cfg: ExperimentConfig, out: Path) -> dict:
    group, hidden, instance, fourier, pipeline_cfg = _pipeline_pieces(cfg)
    dist = run_pipeline(instance, fourier, pipeline_cfg)
    samples = sample(dist, cfg.trials, cfg.seed)
    write_distribution_csv(out / "distribution.csv", dist)
    write_samples_csv(out / "samples.csv", samples)
    result = simon_solve(
        SampleSet(group, tuple(int(s) for s in samples)),
        full_support=dist.support(1e-10),
    )
    recovered = result.candidate
    truth = classical_brute_force_hsp(instance)
    gens = _minimal_generators(recovered)
    return {
        "group": group.name,
        "recovered_generators": [list(group.coords(g)) for g in gens],
        "recovered_elements": [group.label(g) for g in recovered.elements],
        "confirmed": result.confirmed,
        "trials_used": result.samples_used,
        "matches_brute_force": recovered.elements == truth.elements,
        "paths": {"distribution": "distribution.csv", "samples": "samples.csv"},
    }


def _minimal_generators(subgroup: Subgroup) -> list[int]:
    """Greedy small generator list, for reporting."""
    group = subgroup.group
    chosen: list[int] = []
    span = {group.identity}
    for g in subgroup.elements:
        if g in span:
            continue
        chosen.append(g)
        span = set(Subgroup.from_generators(group, chosen).elements)
        if len(span) == subgroup.order:
            break
    return chosen


def _run_shor(cfg: ExperimentConfig, out: Path) -> dict:
    instance = PeriodicInstance(cfg.modulus, cfg.base, cfg.big_q, cfg.allow_any_q)
    spec = cfg.transversal or TransversalSpec()
    if spec.kind == "shor":
        tau = shor_transversal(cfg.big_q)
    else:
        tau = offset_transversal(cfg.big_q, spec.bound, cfg.seed)
    dist = shor_pipeline(instance, tau, cfg.second_transform)
    write_distribution_csv(out / "distribution.csv", dist)
    report = {
        "N": cfg.modulus,
        "a": cfg.base,
        "Q": cfg.big_q,
        "transversal": tau.provenance,
        "distribution_csv_path": "distribution.csv",
        "peak_mass": peak_mass(dist, instance.period, cfg.big_q),
        "r_true": instance.period,
    }
    if cfg.trials:
        samples = sample(dist, cfg.trials, cfg.seed)
        write_samples_csv(out / "samples.csv", samples)
        estimate = period_from_samples(samples, cfg.big_q, cfg.modulus, cfg.base)
        report["samples_path"] = "samples.csv"
        report["period_estimate"] = {
            "period": estimate.period,
            "confirmed": estimate.confirmed,
            "samples_used": estimate.samples_used,
        }
    return report


def _run_sweep(cfg: ExperimentConfig, out: Path) -> dict:
    instance = PeriodicInstance(cfg.modulus, cfg.base, cfg.big_q, cfg.allow_any_q)
    seeds = [cfg.seed + i for i in range(cfg.seeds)]
    rows = transversal_quality_sweep(instance, cfg.bound, seeds)
    lines = ["seed,peak_mass_shor,peak_mass_offset"]
    for seed, pm_shor, pm_offset in rows:
        lines.append(f"{seed},{fmt17(pm_shor)},{fmt17(pm_offset)}")
    (out / "sweep.csv").write_text("\n".join(lines) + "\n", encoding="utf-8")
    offsets = sorted(pm for _, _, pm in rows)
    mid = len(offsets) // 2
    median = offsets[mid] if len(offsets) % 2 else 0.5 * (offsets[mid - 1] + offsets[mid])
    return {
        "N": cfg.modulus,
        "a": cfg.base,
        "Q": cfg.big_q,
        "bound": cfg.bound,
        "r_true": instance.period,
        "csv_path": "sweep.csv",
        "peak_mass_shor": rows[0][1],
        "median_peak_mass_offset": median,
        "wins_shor": sum(1 for _, pm_shor, pm_offset in rows if pm_shor > pm_offset),
        "seeds": cfg.seeds,
    }


def _run_recover(cfg: ExperimentConfig, out: Path) -> dict:
    group = resolve_group(cfg)
    try:
        dist = read_distribution_csv(cfg.dist)
    except OSError as exc:
        raise ConfigError(f"field 'dist': cannot read {cfg.dist!r}: {exc}") from exc
    except ValueError as exc:
        raise ConfigError(f"field 'dist': {exc}") from exc
    fourier = fourier_operator(group)
    pipeline_cfg = PipelineConfig(cfg.second_transform, cfg.measure_granularity)
    ranking = subgroup_consistency_rank(
        dist, group, fourier, pipeline_cfg, instance_seed=cfg.resolved_oracle_seed()
    )
    return {
        "group": group.name,
        "candidates": [
            {
                "elements": [group.label(g) for g in sub.elements],
                "generators": [group.label(g) for g in _minimal_generators(sub)],
                "normal": sub.normal,
                "total_variation": tv,
            }
            for sub, tv in ranking.entries
        ],
        "tie_classes": [list(t) for t in ranking.tie_classes],
    }

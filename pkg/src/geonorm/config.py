"""Experiment configuration files for the batch driver.

A config is a single JSON document:

.. code-block:: json

    {
      "arena": {"n": 1, "m": 1, "backend": "trivial"},
      "objects": {
        "norms":    {"a": {... DiagNorm ...}},
        "graded":   {"g": {... GradedNorm ...}},
        "metrics":  {"phi0": {... ToricMetric ...}},
        "segments": {"s": {... FSSegment ...}},
        "paths":    {"p": {"ring": {"n": 1, "m": 1}, "k": 1,
                           "samples": [{"t": "0", "weights": ["0", "0"]}]}}
      },
      "tasks": [{"op": "energy", "metrics": ["phi0", "phi1"], "kmax": 8}],
      "output": {"format": "csv", "path": "out"}
    }

Rationals are written as "num/den" strings throughout.  A ``paths`` object
is a metric path sampled at finitely many parameter values, the input form
for the psh (convexity-in-t) verification; its per-sample weights follow
the same basis order as FSSegment weights.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .field import parse_fraction
from .graded import GradedNorm, SectionRing
from .norms import DiagNorm
from .segments import FSSegment
from .toric import ToricMetric


class ConfigError(ValueError):
    pass


KNOWN_OPS = {
    "spectrum": ("norms",),
    "distance": ("norms",),
    "volume": ("norms",),
    "join": ("norms",),
    "geodesic": ("norms",),
    "asymptotic": ("graded",),
    "energy": ("metrics",),
    "d1": ("metrics",),
    "maximal": ("metrics",),
    "legendre": ("metrics",),
    "diagnostics": ("metrics",),
    "suite": (),
    "verify": (),
}

VERIFY_TARGETS = ("submultiplicative", "segment_psh", "theoremB")


@dataclass
class MetricPath:
    """A metric path sampled at finitely many t values."""

    ring: SectionRing
    k: int
    samples: tuple  # ((t, weights dict), ...)

    @classmethod
    def from_json(cls, obj):
        ring = SectionRing(obj["ring"]["n"], obj["ring"]["m"])
        k = int(obj["k"])
        basis = ring.basis(k)
        samples = []
        for sample in obj["samples"]:
            t = parse_fraction(sample["t"])
            raw = sample["weights"]
            if len(raw) != len(basis):
                raise ConfigError(
                    f"path sample at t = {sample['t']} has {len(raw)} weights, "
                    f"expected {len(basis)}")
            weights = {a: parse_fraction(w) for a, w in zip(basis, raw)}
            samples.append((t, weights))
        if len(samples) < 3:
            raise ConfigError("a path needs at least three samples")
        return cls(ring, k, tuple(samples))


@dataclass
class ExperimentConfig:
    arena: dict | None
    norms: dict = field(default_factory=dict)
    graded: dict = field(default_factory=dict)
    metrics: dict = field(default_factory=dict)
    segments: dict = field(default_factory=dict)
    paths: dict = field(default_factory=dict)
    tasks: tuple = ()
    output_format: str = "json"
    output_path: str | None = None


def _parse_objects(objects):
    parsed = {
        "norms": {},
        "graded": {},
        "metrics": {},
        "segments": {},
        "paths": {},
    }
    loaders = {
        "norms": DiagNorm.from_json,
        "graded": GradedNorm.from_json,
        "metrics": ToricMetric.from_json,
        "segments": FSSegment.from_json,
        "paths": MetricPath.from_json,
    }
    for kind, table in objects.items():
        if kind not in loaders:
            raise ConfigError(
                f"unknown object kind {kind!r}; expected one of {sorted(loaders)}")
        for name, obj in table.items():
            try:
                parsed[kind][name] = loaders[kind](obj)
            except ConfigError:
                raise
            except Exception as exc:
                raise ConfigError(f"bad {kind} object {name!r}: {exc}") from exc
    return parsed


def _validate_task(idx, task, parsed):
    op = task.get("op")
    refs = []
    for kind in ("norms", "graded", "metrics", "segments"):
        names = task.get(kind)
        if names is None:
            continue
        if isinstance(names, str):
            names = [names]
        for name in names:
            refs.append((kind, name))
    if "path" in task:
        refs.append(("paths", task["path"]))
    for kind, name in refs:
        if name not in parsed[kind]:
            raise ConfigError(
                f"task {idx} ({op}) references undefined {kind} object {name!r}")
    if op == "verify":
        target = task.get("target")
        if target not in VERIFY_TARGETS:
            raise ConfigError(
                f"task {idx}: verify target must be one of {VERIFY_TARGETS}, "
                f"got {target!r}")
    if "t" in task:
        t = parse_fraction(str(task["t"]))
        if not 0 <= t <= 1:
            raise ConfigError(f"task {idx}: t must lie in [0, 1], got {t}")
    if "kmax" in task and int(task["kmax"]) < 1:
        raise ConfigError(f"task {idx}: kmax must be a positive integer")
    if "p" in task and task["p"] != "inf" and int(task["p"]) < 1:
        raise ConfigError(f"task {idx}: p must be a positive integer or 'inf'")


def load_config(path) -> ExperimentConfig:
    """Parse and validate an experiment config file."""
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(
            f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}: "
            f"{exc.msg}") from exc
    if not isinstance(doc, dict):
        raise ConfigError(f"{path}: top level must be a JSON object")

    arena = doc.get("arena")
    if arena is not None:
        for key in ("n", "m"):
            if key not in arena or int(arena[key]) < 1:
                raise ConfigError(f"arena.{key} must be a positive integer")
        backend = arena.get("backend", "trivial")
        if backend not in ("trivial", "tadic"):
            raise ConfigError(
                f"arena.backend must be 'trivial' or 'tadic', got {backend!r}")

    parsed = _parse_objects(doc.get("objects", {}))

    if arena is not None:
        n, m = int(arena["n"]), int(arena["m"])
        for name, metric in parsed["metrics"].items():
            if (metric.n, metric.m) != (n, m):
                raise ConfigError(
                    f"metric {name!r} lives on P^{metric.n} with m = {metric.m}, "
                    f"but the arena declares P^{n} with m = {m}")
        for kind in ("segments", "paths"):
            for name, obj in parsed[kind].items():
                if (obj.ring.n, obj.ring.m) != (n, m):
                    raise ConfigError(
                        f"{kind[:-1]} {name!r} does not match the declared arena")

    tasks = doc.get("tasks", [])
    if not isinstance(tasks, list):
        raise ConfigError("tasks must be a list")
    unknown = sorted({t.get("op") for t in tasks} - set(KNOWN_OPS) - {None})
    missing = [i for i, t in enumerate(tasks) if t.get("op") is None]
    if missing:
        raise ConfigError(f"tasks {missing} have no 'op' field")
    if unknown:
        raise ConfigError(
            f"unknown task ops {unknown}; known ops: {sorted(KNOWN_OPS)}")
    for idx, task in enumerate(tasks):
        _validate_task(idx, task, parsed)

    output = doc.get("output", {})
    fmt = output.get("format", "json")
    if fmt not in ("csv", "json"):
        raise ConfigError(f"output.format must be 'csv' or 'json', got {fmt!r}")

    return ExperimentConfig(
        arena=arena,
        norms=parsed["norms"],
        graded=parsed["graded"],
        metrics=parsed["metrics"],
        segments=parsed["segments"],
        paths=parsed["paths"],
        tasks=tuple(tasks),
        output_format=fmt,
        output_path=output.get("path"),
    )


def metric_pair(config: ExperimentConfig, names=None):
    """Resolve a metric pair: explicit names, or the only two defined."""
    if names:
        missing = [n for n in names if n not in config.metrics]
        if missing:
            raise ConfigError(f"metrics not defined in config: {missing}")
        if len(names) != 2:
            raise ConfigError("exactly two metric names are required")
        return config.metrics[names[0]], config.metrics[names[1]]
    if len(config.metrics) != 2:
        raise ConfigError(
            "config must define exactly two metrics, or the pair must be "
            "named explicitly")
    first, second = list(config.metrics.values())[:2]
    return first, second


__all__ = [
    "ConfigError",
    "ExperimentConfig",
    "KNOWN_OPS",
    "MetricPath",
    "VERIFY_TARGETS",
    "load_config",
    "metric_pair",
]

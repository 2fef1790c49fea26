"""Scenario documents: a JSON schema describing one run of any engine.

A scenario is a single JSON object::

    {
      "kind": "decoherence" | "bec" | "gaussian" | "cooling",
      "seed": 0,                                   // optional, default 0
      "grid": {"start": 0, "stop": 10, "points": 101},
      "parameters": { ... kind-specific ... },
      "output": {"format": "csv", "path": "out.csv"}   // optional
    }

Validation failures raise :class:`ScenarioError` whose message starts with
the offending field path.  Kind-specific physics validation is delegated to
the owning engine module; its message is prefixed with the same path.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Any

import numpy as np

from . import bec, decoherence, gaussian, jc
from .errors import DomainError, ScenarioError

__all__ = ["GridSpec", "Scenario", "parse_scenario", "load_scenario"]

KINDS = ("decoherence", "bec", "gaussian", "cooling")

_CHANNELS = {c.value: c for c in decoherence.Channel}


@dataclass(frozen=True)
class GridSpec:
    """Uniform grid: ``points`` samples from ``start`` to ``stop`` inclusive."""

    start: float
    stop: float
    points: int

    def __post_init__(self) -> None:
        if not self.stop > self.start:
            raise ScenarioError("grid.stop: must be greater than grid.start")
        if self.points < 2:
            raise ScenarioError("grid.points: must be an integer >= 2")

    def to_array(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.points)


@dataclass(frozen=True)
class Scenario:
    """Validated scenario: kind, engine-ready parameter objects, run controls."""

    kind: str
    parameters: dict[str, Any]
    seed: int
    grid: GridSpec | None
    output_format: str | None
    output_path: str | None
    raw: dict[str, Any]


def _fail(path: str, constraint: str) -> ScenarioError:
    return ScenarioError(f"{path}: {constraint}")

def _require_mapping(doc: Any, path: str) -> dict:
    if not isinstance(doc, dict):
        raise _fail(path, "must be a JSON object")
    return doc


def _number(params: dict, key: str, path: str, default: float | None = None) -> float:
    if key not in params:
        if default is not None:
            return default
        raise _fail(f"{path}.{key}", "missing required field")
    value = params[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise _fail(f"{path}.{key}", "must be a number")
    if not math.isfinite(value):
        raise _fail(f"{path}.{key}", "must be finite")
    return float(value)


def _integer(params: dict, key: str, path: str, default: int | None = None) -> int:
    if key not in params:
        if default is not None:
            return default
        raise _fail(f"{path}.{key}", "missing required field")
    value = params[key]
    if isinstance(value, bool) or not isinstance(value, int):
        raise _fail(f"{path}.{key}", "must be an integer")
    return value


def _matrix(params: dict, key: str, path: str) -> np.ndarray:
    try:
        return np.asarray(params[key], dtype=float)
    except (TypeError, ValueError):
        raise _fail(f"{path}.{key}", "must be a numeric array") from None


def _reject_unknown(doc: dict, allowed: set[str], path: str) -> None:
    unknown = set(doc) - allowed
    if unknown:
        raise _fail(f"{path}.{sorted(unknown)[0]}", "unknown field")


def _delegate(path: str, build, *args, **kwargs):
    """Run an engine constructor, prefixing its domain errors with the path."""
    try:
        return build(*args, **kwargs)
    except ScenarioError:
        raise
    except DomainError as exc:
        raise _fail(path, str(exc)) from None


def _validate_decoherence(params: dict, grid: GridSpec | None) -> dict[str, Any]:
    path = "parameters"
    _reject_unknown(
        params,
        {
            "channel",
            "pressure",
            "gas_particle_mass",
            "mean_velocity",
            "radius",
            "temperature_internal",
            "temperature_external",
            "dielectric",
            "survival_time",
        },
        path,
    )
    if grid is None:
        raise _fail("grid", "missing required field (separation grid for kind decoherence)")
    channel_name = params.get("channel")
    if channel_name not in _CHANNELS:
        raise _fail(f"{path}.channel", f"must be one of {sorted(_CHANNELS)}")
    raw_eps = params.get("dielectric", [1.0, 0.0])
    if isinstance(raw_eps, (int, float)) and not isinstance(raw_eps, bool):
        eps = complex(raw_eps)
    elif isinstance(raw_eps, list) and len(raw_eps) == 2:
        eps = complex(raw_eps[0], raw_eps[1])
    else:
        raise _fail(f"{path}.dielectric", "must be a number or a [re, im] pair")
    channel_params = _delegate(
        path,
        decoherence.ChannelParams,
        pressure=_number(params, "pressure", path, default=0.0),
        gas_particle_mass=_number(params, "gas_particle_mass", path),
        mean_velocity=_number(params, "mean_velocity", path),
        radius=_number(params, "radius", path),
        temperature_internal=_number(params, "temperature_internal", path),
        temperature_external=_number(params, "temperature_external", path),
        dielectric=eps,
    )
    survival_time = _number(params, "survival_time", path, default=1.0)
    if survival_time < 0.0:
        raise _fail(f"{path}.survival_time", "must satisfy survival_time >= 0")
    if grid.start < 0.0:
        raise _fail("grid.start", "separations must satisfy dx >= 0")
    return {
        "channel": _CHANNELS[channel_name],
        "channel_params": channel_params,
        "survival_time": survival_time,
    }


def _validate_bec(params: dict, grid: GridSpec | None) -> dict[str, Any]:
    path = "parameters"
    _reject_unknown(
        params, {"K1", "N0", "ktilde", "K3", "sigma_t", "retention", "horizon"}, path
    )
    if grid is None:
        raise _fail("grid", "missing required field (time grid for kind bec)")
    if grid.start != 0.0:
        raise _fail("grid.start", "bec time grid must start at 0")
    K1 = _number(params, "K1", path)
    N0 = _number(params, "N0", path)
    if "ktilde" in params:
        if "K3" in params or "sigma_t" in params:
            raise _fail(f"{path}.ktilde", "give either ktilde or (K3, sigma_t), not both")
        loss = _delegate(
            path, bec.LossParams.from_ktilde, K1, _number(params, "ktilde", path), N0
        )
    else:
        loss = _delegate(
            path,
            bec.LossParams,
            K1=K1,
            K3=_number(params, "K3", path),
            sigma_t=_number(params, "sigma_t", path),
            N0=N0,
        )
    out: dict[str, Any] = {"loss": loss}
    if "retention" in params:
        retention = _number(params, "retention", path)
        if not 0.0 < retention < 1.0:
            raise _fail(f"{path}.retention", "retention must lie in (0, 1)")
        out["retention"] = retention
        out["horizon"] = _number(params, "horizon", path, default=grid.stop)
    elif "horizon" in params:
        raise _fail(f"{path}.horizon", "horizon requires retention")
    return out


def _validate_gaussian(params: dict, grid: GridSpec | None) -> dict[str, Any]:
    path = "parameters"
    _reject_unknown(
        params,
        {"omega", "H_s", "b", "bath", "kappa", "C", "Gamma_m", "A", "D", "sigma0", "xbar0"},
        path,
    )
    if grid is None:
        raise _fail("grid", "missing required field (time grid for kind gaussian)")
    bath_doc = _require_mapping(params.get("bath"), f"{path}.bath")
    _reject_unknown(bath_doc, {"gamma_th", "n_bar"}, f"{path}.bath")
    bath = _delegate(
        f"{path}.bath",
        gaussian.BathModel,
        gamma_th=_number(bath_doc, "gamma_th", f"{path}.bath"),
        n_bar=_number(bath_doc, "n_bar", f"{path}.bath"),
    )

    if "H_s" in params:
        if "omega" in params:
            raise _fail(f"{path}.omega", "give either omega or H_s, not both")
        H_s = _matrix(params, "H_s", path)
    else:
        H_s = _number(params, "omega", path) * np.eye(2)
    if H_s.ndim != 2 or H_s.shape[0] != H_s.shape[1] or H_s.shape[0] % 2:
        raise _fail(f"{path}.H_s", "must be a 2n x 2n matrix")
    d = H_s.shape[0]

    if "C" in params:
        if "kappa" in params:
            raise _fail(f"{path}.kappa", "give either kappa or C, not both")
        C = np.atleast_2d(_matrix(params, "C", path))
        Gamma_m = (
            np.atleast_2d(_matrix(params, "Gamma_m", path))
            if "Gamma_m" in params
            else np.zeros_like(C)
        )
    else:
        kappa = _number(params, "kappa", path, default=0.0)
        if kappa < 0.0:
            raise _fail(f"{path}.kappa", "must satisfy kappa >= 0")
        C = np.zeros((1, d))
        C[0, 0] = math.sqrt(kappa)
        Gamma_m = np.zeros((1, d))
    b = _matrix(params, "b", path) if "b" in params else np.zeros(d)

    sys = _delegate(path, gaussian.GaussianSystem.with_bath, H_s, bath, C=C, Gamma_m=Gamma_m, b=b)
    if "A" in params or "D" in params:
        A = _matrix(params, "A", path) if "A" in params else sys.A
        D = _matrix(params, "D", path) if "D" in params else sys.D
        sys = _delegate(
            path,
            gaussian.GaussianSystem,
            n_modes=sys.n_modes,
            H_s=sys.H_s,
            b=sys.b,
            A=A,
            D=D,
            C=sys.C,
            Gamma_m=sys.Gamma_m,
        )

    sigma0 = _matrix(params, "sigma0", path) if "sigma0" in params else bath.mu * np.eye(d)
    xbar0 = _matrix(params, "xbar0", path) if "xbar0" in params else np.zeros(d)
    state0 = _delegate(path, gaussian.GaussianState, mean=xbar0, cov=sigma0)
    return {"system": sys, "bath": bath, "state0": state0}


def _validate_cooling(params: dict, grid: GridSpec | None) -> dict[str, Any]:
    path = "parameters"
    _reject_unknown(
        params,
        {"omega", "omega_A", "coupling", "epsilon", "n_max", "n_th", "n_rep", "schedule"},
        path,
    )
    omega = _number(params, "omega", path)
    jc_params = _delegate(
        path,
        jc.JCParams,
        omega=omega,
        omega_A=_number(params, "omega_A", path, default=omega),
        coupling=_number(params, "coupling", path),
        epsilon=_number(params, "epsilon", path, default=0.0),
        n_max=_integer(params, "n_max", path),
    )
    n_th = _number(params, "n_th", path)
    if n_th < 0.0:
        raise _fail(f"{path}.n_th", "must satisfy n_th >= 0")
    n_rep = _integer(params, "n_rep", path)
    if n_rep < 1:
        raise _fail(f"{path}.n_rep", "must satisfy n_rep >= 1")
    schedule = params.get("schedule")
    if schedule is not None:
        if not isinstance(schedule, list) or not all(
            isinstance(v, int) and not isinstance(v, bool) and v >= 0 for v in schedule
        ):
            raise _fail(f"{path}.schedule", "must be a list of integers >= 0")
        if len(schedule) != n_rep:
            raise _fail(f"{path}.schedule", "length must equal n_rep")
        schedule = tuple(schedule)
    return {"jc_params": jc_params, "n_th": n_th, "n_rep": n_rep, "schedule": schedule}


_VALIDATORS = {
    "decoherence": _validate_decoherence,
    "bec": _validate_bec,
    "gaussian": _validate_gaussian,
    "cooling": _validate_cooling,
}


def parse_scenario(text: str) -> Scenario:
    """Parse and fully validate a scenario document."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"document: not valid JSON ({exc})") from None
    doc = _require_mapping(doc, "document")
    _reject_unknown(doc, {"kind", "seed", "grid", "parameters", "output"}, "document")

    kind = doc.get("kind")
    if kind not in KINDS:
        raise _fail("kind", f"must be one of {list(KINDS)}")

    seed = _integer(doc, "seed", "document", default=0)
    if seed < 0:
        raise _fail("seed", "must be a non-negative integer")

    grid = None
    if "grid" in doc:
        grid_doc = _require_mapping(doc["grid"], "grid")
        _reject_unknown(grid_doc, {"start", "stop", "points"}, "grid")
        grid = GridSpec(
            start=_number(grid_doc, "start", "grid"),
            stop=_number(grid_doc, "stop", "grid"),
            points=_integer(grid_doc, "points", "grid"),
        )

    output_format = output_path = None
    if "output" in doc:
        out_doc = _require_mapping(doc["output"], "output")
        _reject_unknown(out_doc, {"format", "path"}, "output")
        if "format" in out_doc:
            output_format = out_doc["format"]
            if output_format not in ("csv", "json"):
                raise _fail("output.format", "must be 'csv' or 'json'")
        if "path" in out_doc:
            output_path = out_doc["path"]
            if not isinstance(output_path, str):
                raise _fail("output.path", "must be a string")

    params_doc = _require_mapping(doc.get("parameters", {}), "parameters")
    parameters = _VALIDATORS[kind](params_doc, grid)
    return Scenario(
        kind=kind,
        parameters=parameters,
        seed=seed,
        grid=grid,
        output_format=output_format,
        output_path=output_path,
        raw=doc,
    )


def load_scenario(path: str) -> Scenario:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_scenario(fh.read())

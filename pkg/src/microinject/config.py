"""Scenario configuration: strict JSON parsing with field-path errors.

Unknown keys are rejected so that typos in physics parameters surface
immediately instead of silently falling back to defaults (there are none:
every field is required).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Any, Dict, Mapping, Sequence, Tuple

from .algebra2d import Vec2
from .control import ControllerVariant, ImpedanceParams
from .dynamics import ForcePair, MassParams
from .frames import FrameParams
from .sim import MembraneModel, TrajectoryKind, TrajectorySpec


class ParseError(ValueError):
    """Structural problem: invalid JSON, unknown/missing key, wrong type."""


class InvariantError(ValueError):
    """A numeric constraint on a parsed value is violated."""


@dataclass(frozen=True)
class ScenarioConfig:
    frame: FrameParams
    masses: MassParams
    impedance: ImpedanceParams
    trajectory: TrajectorySpec
    membrane: MembraneModel
    fed: ForcePair
    t_end: float
    dt: float
    variants: Tuple[ControllerVariant, ...]
    seed: int


def _require_mapping(node: Any, path: str) -> Mapping[str, Any]:
    if not isinstance(node, dict):
        raise ParseError(f"{path} must be an object")
    return node


def _check_keys(node: Mapping[str, Any], required: Sequence[str],
                optional: Sequence[str], path: str) -> None:
    allowed = set(required) | set(optional)
    for key in node:
        if key not in allowed:
            where = f"{path}.{key}" if path else key
            raise ParseError(f"unknown key '{where}'")
    for key in required:
        if key not in node:
            where = f"{path}.{key}" if path else key
            raise ParseError(f"missing key '{where}'")


def _number(node: Mapping[str, Any], key: str, path: str) -> float:
    where = f"{path}.{key}" if path else key
    value = node[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ParseError(f"{where} must be a number")
    value = float(value)
    if not math.isfinite(value):
        raise InvariantError(f"{where} must be finite")
    return value


def _positive(value: float, where: str) -> float:
    if not value > 0.0:
        raise InvariantError(f"{where} must be > 0")
    return value


def _non_negative(value: float, where: str) -> float:
    if not value >= 0.0:
        raise InvariantError(f"{where} must be >= 0")
    return value


def _vec2(node: Mapping[str, Any], key: str, path: str) -> Vec2:
    where = f"{path}.{key}" if path else key
    value = node[key]
    if (
        not isinstance(value, list)
        or len(value) != 2
        or any(isinstance(v, bool) or not isinstance(v, (int, float)) for v in value)
    ):
        raise ParseError(f"{where} must be an array of two numbers")
    out = Vec2(float(value[0]), float(value[1]))
    if not out.is_finite():
        raise InvariantError(f"{where} components must be finite")
    return out


def _parse_frame(node: Any) -> FrameParams:
    node = _require_mapping(node, "frame")
    _check_keys(node, ("alpha", "dx", "dy", "fx", "fy"), (), "frame")
    alpha = _number(node, "alpha", "frame")
    dx = _positive(_number(node, "dx", "frame"), "frame.dx")
    dy = _positive(_number(node, "dy", "frame"), "frame.dy")
    fx = _positive(_number(node, "fx", "frame"), "frame.fx")
    fy = _positive(_number(node, "fy", "frame"), "frame.fy")
    return FrameParams(alpha=alpha, dx=dx, dy=dy, fx=fx, fy=fy)


def _parse_masses(node: Any) -> MassParams:
    node = _require_mapping(node, "masses")
    _check_keys(node, ("mx", "my", "mp"), (), "masses")
    return MassParams(
        mx=_positive(_number(node, "mx", "masses"), "masses.mx"),
        my=_positive(_number(node, "my", "masses"), "masses.my"),
        mp=_positive(_number(node, "mp", "masses"), "masses.mp"),
    )


def _parse_impedance(node: Any) -> ImpedanceParams:
    node = _require_mapping(node, "impedance")
    _check_keys(node, ("m", "b", "k"), (), "impedance")
    return ImpedanceParams(
        m=_positive(_number(node, "m", "impedance"), "impedance.m"),
        b=_positive(_number(node, "b", "impedance"), "impedance.b"),
        k=_positive(_number(node, "k", "impedance"), "impedance.k"),
    )


def _parse_trajectory(node: Any) -> TrajectorySpec:
    node = _require_mapping(node, "trajectory")
    _check_keys(
        node, ("kind", "start", "duration"), ("end", "amplitude", "frequency"),
        "trajectory",
    )
    kind_raw = node["kind"]
    if kind_raw not in (k.value for k in TrajectoryKind):
        raise ParseError(
            "trajectory.kind must be one of: "
            + ", ".join(sorted(k.value for k in TrajectoryKind))
        )
    kind = TrajectoryKind(kind_raw)
    start = _vec2(node, "start", "trajectory")
    duration = _positive(_number(node, "duration", "trajectory"), "trajectory.duration")
    if kind is TrajectoryKind.QUINTIC:
        if "end" not in node:
            raise ParseError("missing key 'trajectory.end'")
        for forbidden in ("amplitude", "frequency"):
            if forbidden in node:
                raise ParseError(
                    f"trajectory.{forbidden} is only valid for kind 'Sinusoid'"
                )
        return TrajectorySpec(
            kind=kind, start=start, duration=duration,
            end=_vec2(node, "end", "trajectory"),
        )
    for required in ("amplitude", "frequency"):
        if required not in node:
            raise ParseError(f"missing key 'trajectory.{required}'")
    if "end" in node:
        raise ParseError("trajectory.end is only valid for kind 'Quintic'")
    return TrajectorySpec(
        kind=kind, start=start, duration=duration,
        amplitude=_vec2(node, "amplitude", "trajectory"),
        frequency=_positive(
            _number(node, "frequency", "trajectory"), "trajectory.frequency"
        ),
    )


def _parse_membrane(node: Any) -> MembraneModel:
    node = _require_mapping(node, "membrane")
    _check_keys(node, ("stiffness", "damping", "contact_x"), (), "membrane")
    return MembraneModel(
        stiffness=_non_negative(
            _number(node, "stiffness", "membrane"), "membrane.stiffness"
        ),
        damping=_non_negative(
            _number(node, "damping", "membrane"), "membrane.damping"
        ),
        contact_x=_number(node, "contact_x", "membrane"),
    )


def _parse_variants(value: Any) -> Tuple[ControllerVariant, ...]:
    if not isinstance(value, list):
        raise ParseError("run.variants must be an array of variant names")
    if not value:
        raise InvariantError("run.variants must not be empty (no variants selected)")
    out = []
    valid = ", ".join(sorted(v.value for v in ControllerVariant))
    for i, name in enumerate(value):
        if not isinstance(name, str) or name not in (
            v.value for v in ControllerVariant
        ):
            raise ParseError(
                f"run.variants[{i}] must be one of: {valid}"
            )
        out.append(ControllerVariant(name))
    return tuple(out)


def _parse_run(node: Any) -> Tuple[float, float, Tuple[ControllerVariant, ...]]:
    node = _require_mapping(node, "run")
    _check_keys(node, ("t_end", "dt", "variants"), (), "run")
    t_end = _positive(_number(node, "t_end", "run"), "run.t_end")
    dt = _positive(_number(node, "dt", "run"), "run.dt")
    return t_end, dt, _parse_variants(node["variants"])


def _parse_seed(value: Any) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ParseError("seed must be an integer")
    if value < 0:
        raise InvariantError("seed must be >= 0")
    return value


_TOP_KEYS = ("frame", "masses", "impedance", "trajectory", "membrane", "fed",
             "run", "seed")


def parse_config(text: str) -> ScenarioConfig:
    """Parse and fully validate a scenario document.

    Raises ParseError for structural problems (invalid JSON, unknown or
    missing keys, wrong types) and InvariantError when a value violates a
    model constraint; both messages name the offending field path.
    """
    try:
        root = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc
    root = _require_mapping(root, "config")
    _check_keys(root, _TOP_KEYS, (), "")
    fed = _vec2(root, "fed", "")
    t_end, dt, variants = _parse_run(root["run"])
    return ScenarioConfig(
        frame=_parse_frame(root["frame"]),
        masses=_parse_masses(root["masses"]),
        impedance=_parse_impedance(root["impedance"]),
        trajectory=_parse_trajectory(root["trajectory"]),
        membrane=_parse_membrane(root["membrane"]),
        fed=ForcePair(fed.a0, fed.a1),
        t_end=t_end,
        dt=dt,
        variants=variants,
        seed=_parse_seed(root["seed"]),
    )


def load_config(path: str) -> ScenarioConfig:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_config(fh.read())

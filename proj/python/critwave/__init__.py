"""Python interface to the critwave solver and classifier."""

import json
from typing import Any, Iterable, Mapping

from . import _core

__all__ = [
    "constants",
    "ground_state",
    "check_coefficient",
    "run",
    "sweep",
    "criterion_names",
    "verify",
]


def constants(d: int = 3) -> dict[str, Any]:
    """Ground-state constants for dimension d in {3, 4, 5}."""
    return json.loads(_core.constants(d))


def ground_state(d: int, r: float, lam: float = 1.0) -> float:
    if lam == 1.0:
        return _core.ground_state(d, r)
    return _core.ground_state_rescaled(d, lam, r)


def check_coefficient(spec: Mapping[str, Any], d: int = 3) -> list[dict[str, Any]]:
    """Condition reports (defocusing, focusing, decay) for a coefficient spec."""
    return json.loads(_core.check_coefficient(json.dumps(dict(spec)), d))


def run(config: Mapping[str, Any], out_dir: str = "") -> tuple[dict[str, Any], str]:
    """Runs one experiment. Returns the summary and the trace as CSV text.

    Artifacts are written to out_dir when it is given.
    """
    summary, trace = _core.run(json.dumps(dict(config)), str(out_dir))
    return json.loads(summary), trace


def sweep(config: Mapping[str, Any], a_values: Iterable[float], csv: str) -> list[dict[str, Any]]:
    return _core.sweep(json.dumps(dict(config)), [float(a) for a in a_values], str(csv))


def criterion_names() -> list[str]:
    return list(_core.criterion_names())


def verify(only: Iterable[str] = (), dt_scale: float = 1.0, artifact_dir: str = "") -> list[dict[str, Any]]:
    return _core.verify(list(only), dt_scale, str(artifact_dir))

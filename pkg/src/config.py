"""Engine configuration and stabilization escalation.

This module provides the tunable knobs of the computation engine:

- Escalation schedule for the Hilbert-Samuel stabilization driver
- Engine defaults (monomial order, field, caps, worker pool)
- Loading the ``engine`` section of ``project.config.json``
"""

import json
from collections.abc import Iterator
from dataclasses import dataclass, fields, replace
from pathlib import Path
from typing import Any

from src.errors import PreconditionError

DEFAULT_CONFIG_FILE = "project.config.json"

ORDER_NAMES = ("degrevlex", "deglex", "lex")
BACKENDS = ("thread", "process")


@dataclass(frozen=True)
class EscalationPolicy:
    """Exponential growth of the value-table length while fitting.

    Attributes:
        multiplier: Growth factor between attempts
        cap: Largest table index ever requested
    """

    multiplier: int = 2
    cap: int = 64

    def start(self, dim: int) -> int:
        """First table length for an expected dimension.

        Args:
            dim: Expected degree of the Hilbert-Samuel polynomial

        Returns:
            Initial nMax, clipped at the cap
        """
        return min(2 * dim + 3, self.cap)

    def limits(self, dim: int) -> Iterator[int]:
        """Yield the nMax schedule ``2d+3, 2(2d+3), ...`` ending at the cap.

        Args:
            dim: Expected degree of the Hilbert-Samuel polynomial

        Yields:
            Strictly increasing nMax values
        """
        current = self.start(dim)
        yield current
        while current < self.cap:
            current = min(current * self.multiplier, self.cap)
            yield current


@dataclass(frozen=True)
class EngineConfig:
    """Configuration for one engine run.

    Attributes:
        order: Monomial order name (degrevlex, deglex or lex)
        field: Field descriptor, ``q`` or ``fp:<p>``
        max_power: Stabilization cap on nMax
        min_window: Smallest trailing window accepted by the fit
        depth_cap: Deepest blow-up recursion allowed
        workers: Worker count for independent computations
        backend: ``thread`` or ``process`` pool
        power_checks: Number of powers used by power checks
        timeout_secs: Wall clock cap, None for unlimited
        max_basis_size: Cap on Groebner basis size, None for unlimited
    """

    order: str = "degrevlex"
    field: str = "q"
    max_power: int = 64
    min_window: int = 3
    depth_cap: int = 64
    workers: int = 1
    backend: str = "thread"
    power_checks: int = 3
    timeout_secs: float | None = None
    max_basis_size: int | None = None

    def __post_init__(self) -> None:
        if self.order not in ORDER_NAMES:
            raise PreconditionError(f"unknown monomial order '{self.order}'", order=self.order)
        if self.backend not in BACKENDS:
            raise PreconditionError(f"unknown backend '{self.backend}'", backend=self.backend)
        for name in ("max_power", "min_window", "depth_cap", "workers", "power_checks"):
            if getattr(self, name) < 1:
                raise PreconditionError(f"{name} must be positive", **{name: getattr(self, name)})
        if self.timeout_secs is not None and self.timeout_secs <= 0:
            raise PreconditionError("timeout_secs must be positive", timeout_secs=self.timeout_secs)

    @property
    def escalation(self) -> EscalationPolicy:
        """Escalation schedule bounded by ``max_power``."""
        return EscalationPolicy(cap=self.max_power)

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "EngineConfig":
        """Build a configuration from a plain mapping.

        Args:
            data: Keys matching the dataclass fields

        Returns:
            EngineConfig

        Raises:
            PreconditionError: If a key is unknown
        """
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise PreconditionError(f"unknown engine settings: {', '.join(unknown)}")
        return cls(**data)

    def override(self, **changes: Any) -> "EngineConfig":
        """Return a copy with the non-None changes applied."""
        return replace(self, **{k: v for k, v in changes.items() if v is not None})

    def to_dict(self) -> dict[str, Any]:
        """Serialize to a plain mapping."""
        return {f.name: getattr(self, f.name) for f in fields(self)}


def load_config(path: Path | str | None = None) -> EngineConfig:
    """Read the ``engine`` section of a project configuration file.

    Args:
        path: Configuration file; defaults to ``project.config.json`` in the
            working directory, and a missing default file means defaults

    Returns:
        EngineConfig
    """
    if path is None:
        path = Path(DEFAULT_CONFIG_FILE)
        if not path.exists():
            return EngineConfig()
    path = Path(path)

    try:
        data = json.loads(path.read_text())
    except (OSError, json.JSONDecodeError) as e:
        raise PreconditionError(f"cannot read configuration {path}: {e}", path=path) from e

    return EngineConfig.from_dict(data.get("engine", {}))

"""Machine-readable run reports emitted by the command line tool."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any

from . import __version__


@dataclass
class RunReport:
    scenario: str
    inputs: dict[str, Any] = field(default_factory=dict)
    results: list[tuple[str, float, str]] = field(default_factory=list)
    seed: int | None = None
    tool_version: str = __version__

    def add(self, name: str, value: float, unit: str = "") -> None:
        self.results.append((name, float(value), unit))

    def value(self, name: str) -> float:
        for n, v, _ in self.results:
            if n == name:
                return v
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {
            "scenario": self.scenario,
            "inputs": self.inputs,
            "results": [{"name": n, "value": v, "unit": u} for n, v, u in self.results],
            "seed": self.seed,
            "tool_version": self.tool_version,
        }

    def to_json(self) -> str:
        # allow_nan=False: an unbounded result must be reported as a string, not Infinity
        return json.dumps(self.to_dict(), indent=2, sort_keys=True, allow_nan=False)

    @classmethod
    def from_json(cls, text: str) -> "RunReport":
        obj = json.loads(text)
        return cls(
            scenario=obj["scenario"],
            inputs=obj.get("inputs", {}),
            results=[(r["name"], float(r["value"]), r["unit"]) for r in obj.get("results", [])],
            seed=obj.get("seed"),
            tool_version=obj.get("tool_version", __version__),
        )

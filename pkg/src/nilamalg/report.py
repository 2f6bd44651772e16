"""JSON reports emitted by the command line tool."""

from __future__ import annotations

import hashlib
import json
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from importlib import resources
from typing import Any, Optional

from . import __version__
from .fpgroup import FpGroup
from .parser import format_presentation


def presentation_hash(G: FpGroup) -> str:
    text = format_presentation(G.presentation)
    return hashlib.sha256(text.encode()).hexdigest()[:16]


def load_schema() -> dict:
    return json.loads(resources.files("nilamalg").joinpath("report.schema.json").read_text())


@dataclass
class Report:
    command: str
    inputs: list = field(default_factory=list)
    verdicts: list = field(default_factory=list)
    certificates: list = field(default_factory=list)
    trace: Optional[dict] = None
    timings: dict = field(default_factory=dict)
    version: str = __version__

    def add_group(self, G: FpGroup, spec: str | None = None):
        entry: dict[str, Any] = {
            "name": G.name,
            "order": G.order(),
            "p": G.params.p,
            "n": G.params.n,
            "hash": presentation_hash(G),
        }
        if spec is not None:
            entry["spec"] = spec
        self.inputs.append(entry)

    def verdict(self, name: str, value, expected=None):
        v = {"name": name, "value": value}
        if expected is not None:
            v["expected"] = expected
        self.verdicts.append(v)

    @contextmanager
    def timed(self, label: str):
        t = time.perf_counter()
        try:
            yield
        finally:
            self.timings[label] = round(time.perf_counter() - t, 6)

    def as_dict(self) -> dict:
        out = {
            "command": self.command,
            "inputs": self.inputs,
            "verdicts": self.verdicts,
            "certificates": self.certificates,
            "timings": self.timings,
            "version": self.version,
        }
        if self.trace is not None:
            out["trace"] = self.trace
        return out

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), sort_keys=True, indent=2, default=str)

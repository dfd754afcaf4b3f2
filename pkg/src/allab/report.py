"""Structured results shared by all CLI sub-commands."""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field

HOLDS, FAILS, INFO, ERROR = "holds", "fails", "info", "error"


@dataclass
class Check:
    name: str
    verdict: str
    detail: str = ""
    witness: object = None

    def __post_init__(self):
        if self.verdict == FAILS and self.witness is None:
            raise ValueError(f"failed check {self.name!r} needs a witness")

    def line(self):
        if self.verdict == INFO:
            return f"{self.name}: {self.detail}"
        text = f"{self.name}: {self.verdict}"
        if self.detail:
            text += f" ({self.detail})" if self.verdict == HOLDS else f": {self.detail}"
        return text


@dataclass
class Report:
    command: str
    checks: list = field(default_factory=list)

    def add(self, name, verdict, detail="", witness=None):
        self.checks.append(Check(name, verdict, detail, witness))
        return self

    def info(self, name, detail, witness=None):
        return self.add(name, INFO, detail, witness)

    def verdict(self, name, ok, detail="", witness=None, fail_detail=None):
        if ok:
            return self.add(name, HOLDS, detail)
        return self.add(name, FAILS, fail_detail if fail_detail is not None else detail, witness)

    @property
    def exit_status(self):
        if any(c.verdict == ERROR for c in self.checks):
            return 2
        if any(c.verdict == FAILS for c in self.checks):
            return 1
        return 0

    def to_dict(self):
        return {
            "command": self.command,
            "checks": [asdict(c) for c in self.checks],
            "exit_status": self.exit_status,
        }

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2, ensure_ascii=False)

    @classmethod
    def from_dict(cls, data):
        return cls(data["command"], [Check(**c) for c in data["checks"]])

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))

    def to_text(self):
        lines = [f"command: {self.command}"]
        lines += [c.line() for c in self.checks]
        return "\n".join(lines)

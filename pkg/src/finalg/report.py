from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class Report:
    """Outcome of an audit or search.

    ``witnesses`` hold plain JSON-able values (element indices, member lists,
    maps) so a report can be serialized and replayed through the library.
    """

    command: str
    outcome: str = "pass"
    witnesses: list = field(default_factory=list)
    details: dict = field(default_factory=dict)
    timing: float | None = None

    @property
    def ok(self) -> bool:
        return self.outcome == "pass"

    def fail(self, **witness) -> None:
        self.outcome = "fail"
        self.witnesses.append(witness)

    def merge(self, other: Report, prefix: str | None = None) -> None:
        if not other.ok:
            self.outcome = "fail" if other.outcome == "fail" else self.outcome
            for w in other.witnesses:
                self.witnesses.append({"part": prefix or other.command, **w})

    def to_dict(self) -> dict:
        d = {
            "command": self.command,
            "outcome": self.outcome,
            "witnesses": self.witnesses,
            "details": self.details,
        }
        if self.timing is not None:
            d["timing"] = self.timing
        return d

"""Shared result type for executable property checkers."""

from __future__ import annotations


class CheckReport:
    """Outcome of one checker run.

    verdict is "pass", "bounded-pass" (exhaustive within stated bounds), or
    "fail"; a fail always carries at least one concrete witness.
    """

    def __init__(self, name, verdict, witnesses=None, bounds=None, details=""):
        self.name = name
        self.verdict = verdict
        self.witnesses = list(witnesses or [])
        self.bounds = dict(bounds or {})
        self.details = details
        if verdict == "fail":
            assert self.witnesses, f"fail verdict for {name} without witness"

    @property
    def ok(self):
        return self.verdict != "fail"

    def as_dict(self):
        return {"name": self.name, "verdict": self.verdict,
                "witnesses": [repr(w) for w in self.witnesses],
                "bounds": self.bounds, "details": self.details}

    def __repr__(self):
        return f"<CheckReport {self.name}: {self.verdict}>"

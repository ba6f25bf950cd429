"""Error-indication bookkeeping shared by the ECHO and Fugue guards."""

from dataclasses import dataclass, field
from typing import Callable, NamedTuple

import numpy as np


class Boundary(NamedTuple):
    """A transformation output inside one guarded computation.

    ``block`` is the compression (ECHO) or message word (Fugue) index,
    ``round`` the round inside it and ``sub`` the AES round / sub-round.
    """

    stage: str
    block: int
    round: int
    sub: int


# hook(boundary, value) -> value; lets a caller observe or corrupt any boundary
Hook = Callable[[Boundary, np.ndarray], np.ndarray]


class Alarm(NamedTuple):
    check: str
    boundary: Boundary
    index: int


@dataclass
class SignatureReport:
    """Flags raised during one guarded computation (or a batch of them).

    ``by_check`` maps each check kind to a boolean array with the batch shape
    (a 0-d array for unbatched runs). ``alarms`` carries per-location detail
    and is only populated for unbatched runs.
    """

    by_check: dict = field(default_factory=dict)
    evaluated: dict = field(default_factory=dict)
    alarms: list = field(default_factory=list)

    @property
    def detected(self):
        out = np.zeros((), dtype=bool)
        for raised in self.by_check.values():
            out = out | raised
        return out

    @property
    def raised(self) -> bool:
        return bool(np.any(self.detected))

    def raised_checks(self) -> list[str]:
        return sorted(k for k, v in self.by_check.items() if np.any(v))

    def merge(self, other: "SignatureReport") -> "SignatureReport":
        for kind, raised in other.by_check.items():
            self.by_check[kind] = self.by_check.get(kind, False) | raised
        for kind, n in other.evaluated.items():
            self.evaluated[kind] = self.evaluated.get(kind, 0) + n
        self.alarms.extend(other.alarms)
        return self


class Recorder:
    """Collects check outcomes; ``raised`` has shape batch + (locations,)."""

    def __init__(self, batch_shape: tuple, hook: Hook | None = None):
        self.batch_shape = tuple(batch_shape)
        self.hook = hook
        self.report = SignatureReport()

    def record(self, kind: str, boundary: Boundary, raised: np.ndarray) -> None:
        raised = np.asarray(raised, dtype=bool)
        if self.hook is not None:
            # comparator faults are injected here when a campaign opts in
            raised = self.hook(boundary._replace(stage=kind + ".flag"), raised)
        n = raised.shape[-1]
        any_raised = raised.any(axis=-1)
        prev = self.report.by_check.get(kind)
        self.report.by_check[kind] = any_raised if prev is None else prev | any_raised
        self.report.evaluated[kind] = self.report.evaluated.get(kind, 0) + n
        if not self.batch_shape:
            for idx in np.flatnonzero(raised):
                self.report.alarms.append(Alarm(kind, boundary, int(idx)))


def tap(hook: Hook | None, boundary: Boundary, value: np.ndarray) -> np.ndarray:
    return value if hook is None else hook(boundary, value)

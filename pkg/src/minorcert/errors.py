"""Exception hierarchy shared by every module."""

from __future__ import annotations


class MinorCertError(Exception):
    """Base class for all library errors."""


class NullGraph(MinorCertError, ValueError):
    pass


class NotAForest(MinorCertError, ValueError):
    pass


class NotEdges(MinorCertError, ValueError):
    pass


class SameVertex(MinorCertError, ValueError):
    pass


class InvalidMap(MinorCertError, ValueError):
    pass


class TooLarge(MinorCertError, ValueError):
    pass


class Disconnected(MinorCertError, ValueError):
    pass


class BadParams(MinorCertError, ValueError):
    pass


class NoViolation(MinorCertError, ValueError):
    pass


class NotATree(MinorCertError, ValueError):
    pass


class IsCentroid(MinorCertError, ValueError):
    pass


class DensityTooLow(MinorCertError, ValueError):
    pass


class TooFewPieces(MinorCertError, ValueError):
    pass


class PatternTooLarge(MinorCertError, ValueError):
    pass


class ParseError(MinorCertError, ValueError):
    def __init__(self, message: str, location: str | None = None):
        self.location = location
        super().__init__(f"{location}: {message}" if location else message)


class NotHFree(MinorCertError, ValueError):
    def __init__(self, offending: list[int]):
        self.offending = list(offending)
        super().__init__(f"instances not H-free: {self.offending}")


class InternalInvariantBroken(MinorCertError, AssertionError):
    """A proven invariant failed at runtime; always an implementation bug."""


class HeuristicFailed(MinorCertError, RuntimeError):
    """A best-effort search gave up. This is never a disproof."""

    def __init__(self, stage: str, detail: str = ""):
        self.stage = stage
        self.detail = detail
        super().__init__(f"heuristic failed at stage {stage!r}" + (f": {detail}" if detail else ""))


class NoLinkageFound(MinorCertError, RuntimeError):
    def __init__(self, exhaustive: bool):
        self.exhaustive = exhaustive
        kind = "proved infeasible" if exhaustive else "search budget exhausted"
        super().__init__(f"no linkage found ({kind})")


class NoCoverFound(MinorCertError, RuntimeError):
    def __init__(self, exhaustive: bool = False):
        self.exhaustive = exhaustive
        super().__init__("no knitted cover found" + (" (proved infeasible)" if exhaustive else ""))

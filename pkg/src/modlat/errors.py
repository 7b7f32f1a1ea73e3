"""Exception types raised across the package."""


class ModlatError(Exception):
    """Base class for all errors raised by modlat."""


class NotALattice(ModlatError):
    def __init__(self, pair, kind="meet"):
        self.pair = tuple(pair)
        self.kind = kind
        super().__init__(f"no unique {kind} for elements {self.pair}")


class CyclicCovers(ModlatError):
    pass


class BadInterval(ModlatError):
    pass


class SizeCap(ModlatError):
    pass


class NotBoolean(ModlatError):
    pass


class Condition1Violation(ModlatError):
    pass


class DegenerateAtom(ModlatError):
    pass


class NotAnAutomorphism(ModlatError):
    pass


class ClosureBudgetExceeded(ModlatError):
    pass


class BadIndices(ModlatError):
    pass


class XNotUnderAtom(ModlatError):
    pass


class NotSubgroup(ModlatError):
    pass


class MalformedNet(ModlatError):
    pass


class HNotContained(ModlatError):
    pass


class PrerequisiteMissing(ModlatError):
    pass


class PreconditionsNotChecked(ModlatError):
    pass


class ParseError(ModlatError):
    pass


class NotAUnit(ModlatError):
    pass


class NonFaithfulFrame(ModlatError):
    pass


class NotModular(ModlatError):
    def __init__(self, triple):
        self.triple = tuple(triple) if triple is not None else None
        super().__init__(f"modular law fails at (a, x, b) = {self.triple}")

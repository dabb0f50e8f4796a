"""Exception types raised by cutswap."""


class CutswapError(Exception):
    """Base class for all errors raised by this package."""


class MalformedRow(CutswapError):
    def __init__(self, line, detail="duplicate token"):
        self.line = line
        super().__init__(f"line {line}: {detail}")


class BadSpec(CutswapError):
    pass


class TooLarge(CutswapError):
    def __init__(self, n, limit):
        self.n = n
        super().__init__(f"{n} columns exceeds the brute-force limit of {limit}")


class InternalInvariant(CutswapError):
    """A property the algorithms guarantee was observed to be violated."""


class InvalidOrder(CutswapError):
    """The row order handed to swap partitioning is not a swap overlap order.

    This is a broken precondition, never a verdict about the family.
    """

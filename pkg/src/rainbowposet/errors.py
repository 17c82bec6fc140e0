"""Exception types shared across the toolkit."""


class RainbowPosetError(Exception):
    """Base class for all toolkit errors."""


class CyclicInput(RainbowPosetError):
    """Cover arcs contain a directed cycle."""


class CapExceeded(RainbowPosetError):
    """A request exceeds a configured enumeration or size cap."""


class BadParams(RainbowPosetError):
    """Builder parameters violate their constraints."""


class PreconditionViolated(RainbowPosetError):
    """An operation's stated precondition does not hold."""


class NotATreePoset(RainbowPosetError):
    """A tree-only operation received a poset whose cover graph is not a tree."""


class ForcingTimeout(RainbowPosetError):
    """A forcing search exceeded its wall-clock budget."""

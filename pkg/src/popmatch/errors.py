"""Exception types shared across the package."""


class PopmatchError(Exception):
    """Base class for all errors raised by this package."""


class InvalidPreferenceSystem(PopmatchError):
    """The preference lists do not describe a valid bipartite system."""


class NotBipartite(InvalidPreferenceSystem):
    """An edge joins two vertices of the same side."""


class NotStrict(PopmatchError):
    """Operation requires strict preferences but a rank-group has ties."""


class InvalidMatching(PopmatchError):
    """Edge set is not a matching of the given preference system."""


class UnknownEdge(PopmatchError):
    """An edge is not present in the preference system or valuation."""


class UnknownElement(PopmatchError):
    """A vertex or edge referenced by a restriction does not exist."""


class InvalidAxis(PopmatchError):
    """An axis does not cover the side it is supposed to order."""


class InstanceTooLarge(PopmatchError):
    """Brute-force enumeration refused; raise the guard or force it."""


class NoMasterList(PopmatchError):
    """A solver requiring a one-sided master list found none."""


class UniquenessViolated(PopmatchError):
    """Internal consistency failure: the two proposal orders disagreed
    where a unique stable matching was guaranteed."""


class ZeroCostEdge(PopmatchError):
    """Budgeted solvers require every edge cost to be at least 1."""


class MalformedClause(PopmatchError):
    """A CNF clause does not have exactly three valid literals."""


class BadPartition(PopmatchError):
    """A colored graph's partition is unusable for the reduction."""

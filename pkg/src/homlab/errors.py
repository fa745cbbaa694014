"""Exception types shared across the package."""


class HomlabError(Exception):
    """Base class for all errors raised by this package."""


class InvalidVertex(HomlabError):
    """A vertex index is outside the structure's domain or otherwise illegal."""


class SignatureMismatch(HomlabError):
    """Two structures do not share a signature where one is required."""


class SizeLimit(HomlabError):
    """Input exceeds the documented exactness regime for an operation."""

    def __init__(self, what, limit, got):
        super().__init__(f"{what}: limit {limit}, got {got}")
        self.what = what
        self.limit = limit
        self.got = got


class InvalidEmbedding(HomlabError):
    """A claimed embedding does not preserve/reflect the relations."""


class SelfLoop(HomlabError):
    """Adjacency queried on a pair (x, x)."""


class DomainMismatch(HomlabError):
    """Two structures that must share a domain size do not."""


class NotACRelation(HomlabError):
    """A ternary relation violates the C-relation axioms.

    Carries the violating triple set in .violations.
    """

    def __init__(self, message, violations=()):
        super().__init__(message)
        self.violations = tuple(violations)


class DegenerateDirection(HomlabError):
    """A direction vector produced tied sort keys on the lattice window."""


class WitnessNotFound(HomlabError):
    """An extension query was exhausted up to its bound.

    Signals only that the bound was reached, never non-existence. Carries
    the search bound and, for back-and-forth runs, the partial map built
    so far.
    """

    def __init__(self, bound, partial=None, query=None):
        super().__init__(f"no witness within bound {bound}")
        self.bound = bound
        self.partial = partial
        self.query = query

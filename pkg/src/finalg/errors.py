"""Exception hierarchy shared by every module."""


class AlgebraError(Exception):
    """Base class for all library errors."""


class StructuralError(AlgebraError):
    """Malformed algebra data (bad table shape, entry out of range, ...).

    Distinct from an axiom failure: a structurally broken algebra cannot even
    be evaluated, while an axiom failure is a reported outcome.
    """

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class SignatureMismatch(AlgebraError):
    pass


class ContractError(AlgebraError):
    """A precondition of an operation does not hold."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class ResourceError(AlgebraError):
    """A configured search/size bound would be exceeded."""

    def __init__(self, message, required=None, bound=None):
        super().__init__(message)
        self.required = required
        self.bound = bound


class SearchCeilingError(ResourceError):
    """Search stopped at a ceiling; ``bound_reached`` is the last size fully explored."""

    def __init__(self, message, bound_reached, required=None, bound=None):
        super().__init__(message, required=required, bound=bound)
        self.bound_reached = bound_reached


class NotACongruence(AlgebraError):
    """A candidate relation is not compatible with the operations.

    ``expanded`` is True when the relation is a congruence of the base
    (lattice/residuated) reduct and only an operator breaks compatibility.
    """

    def __init__(self, message, witness=None, expanded=False):
        super().__init__(message)
        self.witness = witness
        self.expanded = expanded


class AuditFailure(AlgebraError):
    """A post-check of a construction failed on a concrete instance."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class ParseError(AlgebraError):
    def __init__(self, message, locus=None):
        super().__init__(f"{locus}: {message}" if locus else message)
        self.locus = locus

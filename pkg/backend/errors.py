"""Exception hierarchy shared by the library, the CLI and the HTTP API."""


class LlctError(Exception):
    """Base class for every error raised on purpose by llct."""
    exit_code = 1
    status_code = 500
    kind = 'error'

    def __init__(self, message='', details=None):
        super().__init__(message)
        self.details = dict(details or {})

    def to_dict(self):
        data = {'error': self.kind, 'message': str(self)}
        data.update(self.details)
        return data


class ParseError(LlctError, ValueError):
    """Syntax or semantic error in a representation expression."""
    exit_code = 2
    status_code = 400
    kind = 'parse_error'

    def __init__(self, message, line=None, column=None, expected=()):
        self.line = line
        self.column = column
        self.expected = tuple(sorted(set(expected)))
        if line is not None:
            message = f'{message} at line {line}, column {column}'
        if self.expected:
            message = f"{message} (expected one of: {', '.join(self.expected)})"
        super().__init__(message)

    def to_dict(self):
        data = super().to_dict()
        data.update({'line': self.line, 'column': self.column, 'expected': list(self.expected)})
        return data


class DomainError(LlctError, ValueError):
    """A mathematically meaningless request (non-invertible scalar, bad atom, ...)."""
    exit_code = 3
    status_code = 422
    kind = 'domain_error'


class NotInvertibleError(DomainError):
    kind = 'not_invertible'


class UnsupportedEvaluationError(DomainError):
    """Evaluation or magnitude requested on an opaque unit or an unspecialized x."""
    kind = 'unsupported_evaluation'


class UnsupportedEigenstructureError(DomainError):
    kind = 'unsupported_eigenstructure'


class TensorNotComputableError(DomainError):
    kind = 'tensor_not_computable'


class MissingDualError(DomainError):
    kind = 'missing_dual'


class SelfDualityError(DomainError):
    kind = 'self_duality'


class AtomConflictError(DomainError):
    kind = 'atom_conflict'


class UncertifiedTruncation(LlctError):
    """The truncation window is too small to certify a polynomial product."""
    exit_code = 4
    status_code = 422
    kind = 'uncertified_truncation'


class InternalInvariantError(LlctError, AssertionError):
    kind = 'internal_invariant'

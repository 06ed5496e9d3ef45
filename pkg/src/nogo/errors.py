"""Exception hierarchy. Input problems and failed checks are kept apart so the
CLI can map them onto distinct exit codes."""


class NogoError(Exception):
    """Base class."""


class InputError(NogoError):
    """Malformed or unsupported input (CLI exit code 2)."""


class CheckFailure(NogoError):
    """A mathematical check came out false (CLI exit code 1)."""


class ParseError(InputError):
    pass


class SchemaVersionError(InputError):
    pass


class UnsupportedAlgebra(InputError):
    pass


class VariableMismatch(InputError):
    pass


class NonReducibleRelation(InputError):
    pass


class UnsupportedTruncation(InputError):
    pass


class ZeroPoint(InputError):
    pass


class AntisymmetryViolation(CheckFailure):
    def __init__(self, i, j, k, residual):
        self.indices = (i, j, k)
        self.residual = residual
        super().__init__(f"c^{k}_{i}{j} + c^{k}_{j}{i} = {residual} != 0 at (i,j,k)=({i},{j},{k})")


class JacobiViolation(CheckFailure):
    def __init__(self, i, j, k, l, residual):
        self.indices = (i, j, k, l)
        self.residual = residual
        super().__init__(f"Jacobi residual {residual} != 0 at (i,j,k,l)=({i},{j},{k},{l})")


class DecompositionFailure(CheckFailure):
    pass


class NotSimple(CheckFailure):
    pass


class DegreeEscape(CheckFailure):
    pass


class MeanUndefined(CheckFailure):
    pass


class NotZeroMean(CheckFailure):
    pass


class CertificateFailure(CheckFailure):
    def __init__(self, step: str, detail: str = ""):
        self.step = step
        self.detail = detail
        super().__init__(f"{step}: {detail}" if detail else step)

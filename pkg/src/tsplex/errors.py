"""Exception hierarchy shared by all tsplex modules."""


class TsplexError(Exception):
    """Base class for all library errors."""


class IndexOutOfRange(TsplexError):
    """A simplex references a node index outside [0, n_nodes)."""


class InclusionViolation(TsplexError):
    """A triangle's face is missing from the edge set."""

    def __init__(self, missing_faces):
        self.missing_faces = list(missing_faces)
        super().__init__(f"inclusion property violated; missing faces: {self.missing_faces}")


class DimensionMismatch(TsplexError):
    """Operand shapes are inconsistent with the complex."""


class EigenFailure(TsplexError):
    """The symmetric eigensolver failed to converge."""


class ZeroVariance(TsplexError):
    """A signal row is constant where nonzero variance is required."""

    def __init__(self, row):
        self.row = row
        super().__init__(f"zero variance in row {row}")


class DegenerateCovariance(TsplexError):
    """Covariance determinant underflowed; entropies are undefined."""


class SolverDivergence(TsplexError):
    """Iterative solver hit the iteration cap without convergence."""


class ZeroSubspace(TsplexError):
    """A nonzero component weight was requested on an empty subspace."""


class EmptyInput(TsplexError):
    """An operation received an empty value vector."""

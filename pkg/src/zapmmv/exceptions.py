"""Exception hierarchy.

Every error raised deliberately by the package derives from :class:`ZapError`
and carries a short machine-readable ``kind`` used by the CLI error line.
"""


class ZapError(ValueError):
    kind = "error"


class DimensionError(ZapError):
    kind = "dimension_mismatch"


class NonFiniteError(ZapError):
    kind = "non_finite_input"


class SingularGramError(ZapError):
    kind = "singular_gram_matrix"


class DivergenceError(ZapError):
    kind = "numerical_divergence"

    def __init__(self, iteration):
        self.iteration = iteration
        super().__init__(f"numerical divergence: non-finite iterate at iteration {iteration}")


class DegenerateSupportError(ZapError):
    kind = "degenerate_support"


class OracleGuardError(ZapError):
    kind = "oracle_guard"


class ParameterError(ZapError):
    kind = "invalid_parameter"

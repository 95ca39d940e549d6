"""Exception and warning types shared across the package.

Input problems (bad shapes, non-finite values, unparseable restriction text)
raise ``ValueError`` subclasses; numerical failures (a linear system that no
amount of jitter makes factorizable, a response orthogonal to every column)
raise ``ArithmeticError`` subclasses.  The CLI maps the former to exit code 2
and the latter to exit code 3.
"""


class SingularMatrixError(ArithmeticError):
    """A symmetric system could not be factorized at any jitter level.

    Signals an unidentifiable model, e.g. p > n with lambda = 0 and a
    trace-degenerate Gram matrix.
    """


class DegenerateResponseError(ArithmeticError):
    """max|X'y| = 0: the regularization grid is undefined."""


class RestrictionSyntaxError(ValueError):
    """A restriction equation failed to parse.

    Parameters
    ----------
    message : str
        Description of the problem.
    line : int or None
        1-based line number within a restriction file, when known.
    column : int or None
        1-based column position of the offending token, when known.
    """

    def __init__(self, message, line=None, column=None):
        loc = ""
        if line is not None:
            loc += "line %d" % line
        if column is not None:
            loc += (", " if loc else "") + "column %d" % column
        super().__init__("%s%s" % (("%s: " % loc) if loc else "", message))
        self.line = line
        self.column = column


class InfeasibleDropWarning(UserWarning):
    """The penalty drove a restricted coefficient below the drop threshold.

    The coefficient cannot be removed from the linear system without risking
    infeasibility of R beta = r, so it is kept (with its penalty magnitude
    clamped) and merely excluded from the selected set.  Diagnostic only; the
    fit is still returned and the restrictions still hold exactly.
    """

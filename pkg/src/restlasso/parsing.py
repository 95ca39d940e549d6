"""Text syntax for linear equality restrictions.

One equation per line, variables written ``b1..bp`` (1-based), e.g.::

    # two restrictions on a 6-coefficient model
    b2 = b4
    b3 + 2 b4 + b5 = 10

Grammar (whitespace-insensitive)::

    equation := expr '=' expr
    expr     := ['+'|'-'] term (('+'|'-') term)*
    term     := number | [number ['*']] var
    var      := 'b' integer
    number   := decimal literal (scientific notation accepted)

Variable terms are moved to the left-hand side and constants to the right,
repeated variables accumulate, and each equation becomes one row of
``R beta = r``.
"""

import re

import numpy as np

from .errors import RestrictionSyntaxError
from .model import RestrictionSet, validate_restrictions

__all__ = ["parse_restriction", "parse_restriction_file", "render_restrictions"]

_TOKEN = re.compile(
    r"""(?P<ws>\s+)
      | (?P<num>(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?)
      | (?P<var>b(?P<varidx>\d+))
      | (?P<op>[-+*=])
    """,
    re.VERBOSE,
)


def _tokenize(line, lineno):
    """Yield (kind, text, column) triples; column is 1-based."""
    pos = 0
    out = []
    while pos < len(line):
        m = _TOKEN.match(line, pos)
        if m is None:
            raise RestrictionSyntaxError(
                "syntax-error: unexpected character %r" % line[pos],
                line=lineno,
                column=pos + 1,
            )
        if m.lastgroup != "ws":
            kind = m.lastgroup
            if kind == "var":
                out.append(("var", m.group("varidx"), pos + 1))
            else:
                out.append((kind, m.group(), pos + 1))
        pos = m.end()
    out.append(("end", "", len(line) + 1))
    return out


def parse_restriction(line, p, lineno=None):
    """Parse one equation into a canonical (row, rhs) pair.

    Parameters
    ----------
    line : str
        The equation text.
    p : int
        Number of model coefficients; variable indices must lie in 1..p.
    lineno : int, optional
        1-based line number used in error messages.

    Returns
    -------
    (ndarray, float)
        Length-p coefficient row and right-hand-side constant.

    Raises
    ------
    RestrictionSyntaxError
        With the offending column position for syntax errors, for variable
        indices outside 1..p ("index-out-of-range"), and for equations
        without any variable term ("empty-equation").
    """
    p = int(p)
    if p < 1:
        raise ValueError("p must be >= 1, got %d" % p)
    tokens = _tokenize(line, lineno)
    row = np.zeros(p)
    rhs = 0.0
    side = 1.0  # 1 while left of '=', -1 after
    saw_eq = False
    saw_var = False
    i = 0

    def fail(msg, col):
        raise RestrictionSyntaxError(msg, line=lineno, column=col)

    while True:
        # optional sign, then one term
        sign = 1.0
        kind, text, col = tokens[i]
        while kind == "op" and text in "+-":
            if text == "-":
                sign = -sign
            i += 1
            kind, text, col = tokens[i]
        if kind == "num":
            coef = float(text)
            i += 1
            kind2, text2, col2 = tokens[i]
            if kind2 == "op" and text2 == "*":
                i += 1
                kind2, text2, col2 = tokens[i]
                if kind2 != "var":
                    fail("syntax-error: expected a variable after '*'", col2)
            if kind2 == "var":
                idx = int(text2)
                if not 1 <= idx <= p:
                    fail(
                        "index-out-of-range: b%d outside 1..%d" % (idx, p),
                        col2,
                    )
                row[idx - 1] += side * sign * coef
                saw_var = True
                i += 1
            else:
                rhs -= side * sign * coef
        elif kind == "var":
            idx = int(text)
            if not 1 <= idx <= p:
                fail("index-out-of-range: b%d outside 1..%d" % (idx, p), col)
            row[idx - 1] += side * sign
            saw_var = True
            i += 1
        else:
            fail("syntax-error: expected a term", col)

        kind, text, col = tokens[i]
        if kind == "op" and text in "+-":
            continue
        if kind == "op" and text == "=":
            if saw_eq:
                fail("syntax-error: more than one '='", col)
            saw_eq = True
            side = -1.0
            i += 1
            continue
        if kind == "end":
            break
        fail("syntax-error: expected '+', '-', '=' or end of line", col)

    if not saw_eq:
        fail("syntax-error: missing '='", tokens[-1][2])
    if not saw_var:
        raise RestrictionSyntaxError(
            "empty-equation: no variable term", line=lineno
        )
    return row, rhs


def parse_restriction_file(text, p):
    """Parse a whole restriction file into a validated RestrictionSet.

    One equation per non-empty line; lines starting with '#' are comments.
    Rows are stacked in file order.  Raises RestrictionSyntaxError (with the
    line number) for per-line problems and for a file with no equations;
    rank deficiency propagates from validate_restrictions as ValueError.
    """
    rows = []
    rhs = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        r, c = parse_restriction(line, p, lineno=lineno)
        rows.append(r)
        rhs.append(c)
    if not rows:
        raise RestrictionSyntaxError("empty-equation: no restriction equations found")
    rs = RestrictionSet(rmat=np.array(rows), rvec=np.array(rhs))
    return validate_restrictions(rs, p)


def render_restrictions(restrictions):
    """Render a RestrictionSet back to the canonical text form.

    Coefficients print with full precision (repr), so parsing the rendered
    text reproduces (R, r) exactly.
    """
    lines = []
    for row, c in zip(restrictions.rmat, restrictions.rvec):
        parts = []
        for j in np.flatnonzero(row != 0.0):
            coef = row[j]
            term = "%s*b%d" % (repr(abs(float(coef))), j + 1)
            if not parts:
                parts.append(term if coef > 0 else "-" + term)
            else:
                parts.append(("+ " if coef > 0 else "- ") + term)
        lines.append("%s = %s" % (" ".join(parts), repr(float(c))))
    return "\n".join(lines) + "\n"

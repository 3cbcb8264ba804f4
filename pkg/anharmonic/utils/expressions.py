import re

import sympy

from anharmonic.exceptions import JobSpecError

# "sqrt3" shorthand for sqrt(3)
_BARE_SQRT = re.compile(r"sqrt\s*(\d+(?:\.\d+)?)")
_NAME = re.compile(r"[A-Za-z_]+")
_ALLOWED_NAMES = {"sqrt", "pi", "e", "E"}


def parse_expression(text: str) -> sympy.Expr:
    """Parse a closed numeric expression such as '(2+sqrt3)/4' or '-sqrt(3)/4'."""
    if text is None or not str(text).strip():
        raise JobSpecError("empty numeric expression")
    source = _BARE_SQRT.sub(r"sqrt(\1)", str(text).strip())
    unknown = set(_NAME.findall(source)) - _ALLOWED_NAMES
    if unknown:
        raise JobSpecError(f"{text!r}: unsupported names {sorted(unknown)}")
    try:
        expr = sympy.sympify(source, rational=True)
    except (sympy.SympifyError, SyntaxError, TypeError) as e:
        raise JobSpecError(f"cannot parse {text!r}: {e}") from e
    if not isinstance(expr, sympy.Expr) or expr.free_symbols:
        raise JobSpecError(f"{text!r} must be a number, found symbols {sorted(map(str, expr.free_symbols))}")
    if not expr.is_real:
        raise JobSpecError(f"{text!r} is not real")
    return expr


def parse_number(text) -> float:
    if isinstance(text, (int, float)):
        return float(text)
    return float(parse_expression(text).evalf(30))

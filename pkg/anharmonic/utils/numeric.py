import math
from contextlib import contextmanager, nullcontext

import mpmath

from anharmonic.models import Precision


def is_extended(x) -> bool:
    return isinstance(x, mpmath.mpf)


def working_number(x, precision: Precision):
    """Lift a float into the arithmetic of the requested precision."""
    if precision == Precision.EXTENDED:
        return mpmath.mpf(x)
    return float(x)


@contextmanager
def working_precision(precision: Precision, bits: int):
    ctx = mpmath.workprec(bits) if precision == Precision.EXTENDED else nullcontext()
    with ctx:
        yield


def log(x):
    return mpmath.log(x) if is_extended(x) else math.log(x)


def exp(x):
    return mpmath.exp(x) if is_extended(x) else math.exp(x)


def unit_like(x):
    """The number 1 in the arithmetic of x."""
    return mpmath.mpf(1) if is_extended(x) else 1.0

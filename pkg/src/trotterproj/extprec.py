"""Extended-precision real and complex scalars.

Values are MPFR numbers (through gmpy2) with a 128-bit mantissa, roughly 38
significant decimal digits. All arithmetic here runs inside a private
context, so results do not depend on whatever precision the caller has set
globally, and every operation is correctly rounded and deterministic.

Use :func:`extended` as a context manager to do operator arithmetic on
``ExtReal``/``ExtComplex`` values at the working precision::

    with extended():
        y = (x + 1) / 3
"""
from __future__ import annotations

from decimal import ROUND_HALF_EVEN, Context, Decimal
from fractions import Fraction
from functools import lru_cache
from numbers import Rational
from typing import NamedTuple

import gmpy2
from gmpy2 import mpc, mpfr

__all__ = [
    "PRECISION_BITS",
    "ExtReal",
    "ExtComplex",
    "DomainError",
    "RangeError",
    "Trig",
    "extended",
    "ext",
    "ext_complex",
    "add",
    "sub",
    "mul",
    "div",
    "sqrt",
    "log1p_ext",
    "exp_ext",
    "pi_ext",
    "cospi_frac",
    "versine_pi_frac",
    "sincos_small",
    "one_minus_cos",
    "sincos_pi_fraction",
    "to_decimal",
    "from_decimal",
]

PRECISION_BITS = 128

ExtReal = gmpy2.mpfr
ExtComplex = gmpy2.mpc

_CONTEXT = gmpy2.context(
    precision=PRECISION_BITS,
    real_prec=PRECISION_BITS,
    imag_prec=PRECISION_BITS,
    round=gmpy2.RoundToNearest,
)

EXP_LIMIT = 700


class DomainError(ValueError):
    """Argument outside the mathematical domain of an operation."""


class RangeError(ArithmeticError):
    """Result (or argument) outside the supported exponent range."""


class Trig(NamedTuple):
    cos: mpfr
    sin: mpfr
    versine: mpfr  # 1 - cos, never formed by subtraction near 0


def extended():
    """Context manager switching gmpy2 to the working precision (thread-local)."""
    return gmpy2.context(_CONTEXT)


def ext(x) -> mpfr:
    """Round ``x`` to an ExtReal. Fractions and integers are rounded once."""
    if isinstance(x, mpfr) and x.precision == PRECISION_BITS:
        return x
    with extended():
        if isinstance(x, Fraction) or (isinstance(x, Rational) and not isinstance(x, int)):
            return mpfr(gmpy2.mpq(x.numerator, x.denominator))
        if isinstance(x, Decimal):
            return mpfr(str(x))
        return mpfr(x)


def ext_complex(re, im=0) -> mpc:
    """ExtComplex from a complex number or from its two parts."""
    if isinstance(re, (mpc, complex)) and im == 0:
        re, im = re.real, re.imag
    re, im = ext(re), ext(im)
    # mpc() rounds to the active context, so build it inside ours
    with extended():
        return mpc(re, im)


def _finite(*xs):
    for x in xs:
        if isinstance(x, (mpc, complex)):
            ok = gmpy2.is_finite(mpfr(x.real)) and gmpy2.is_finite(mpfr(x.imag))
        else:
            ok = gmpy2.is_finite(mpfr(x))
        if not ok:
            raise DomainError(f"non-finite operand {x!r}")


def add(a, b):
    _finite(a, b)
    return _CONTEXT.add(a, b)


def sub(a, b):
    _finite(a, b)
    return _CONTEXT.sub(a, b)


def mul(a, b):
    _finite(a, b)
    return _CONTEXT.mul(a, b)


def div(a, b):
    _finite(a, b)
    if b == 0:
        raise DomainError("division by zero")
    return _CONTEXT.div(a, b)


def sqrt(a):
    """Square root; principal branch for complex input."""
    _finite(a)
    if not isinstance(a, (mpc, complex)) and a < 0:
        raise DomainError("square root of a negative real")
    return _CONTEXT.sqrt(a)


def log1p_ext(x) -> mpfr:
    """log(1 + x), accurate for tiny |x|. Raises DomainError for x <= -1."""
    x = ext(x)
    _finite(x)
    if x <= -1:
        raise DomainError("log1p requires x > -1")
    return _CONTEXT.log1p(x)


def exp_ext(x) -> mpfr:
    x = ext(x)
    _finite(x)
    if abs(x) > EXP_LIMIT:
        raise RangeError(f"exp argument {float(x):g} outside [-{EXP_LIMIT}, {EXP_LIMIT}]")
    return _CONTEXT.exp(x)


@lru_cache(maxsize=None)
def pi_ext() -> mpfr:
    return _CONTEXT.const_pi()


@lru_cache(maxsize=None)
def _half_angle(j: int, q: int) -> Trig:
    # angle pi / (q * 2**j)
    with extended():
        if q == 1 and j == 0:
            return Trig(mpfr(-1), mpfr(0), mpfr(2))
        if q == 1 and j == 1:
            return Trig(mpfr(0), mpfr(1), mpfr(1))
        if q == 3 and j == 0:
            half = mpfr(1) / 2
            return Trig(half, gmpy2.sqrt(mpfr(3)) / 2, half)
        prev = _half_angle(j - 1, q)
        c = gmpy2.sqrt((1 + prev.cos) / 2)
        s = prev.sin / (2 * c)
        v = s * s / (1 + c)
        return Trig(c, s, v)


def _check_frac_args(j, q):
    if q not in (1, 3):
        raise ValueError(f"unsupported denominator q={q!r}; expected 1 or 3")
    if not 0 <= j <= 64:
        raise ValueError(f"j={j!r} outside [0, 64]")


def cospi_frac(j: int, q: int) -> tuple[mpfr, mpfr]:
    """(cos, sin) of pi / (q * 2**j) for q in {1, 3}, 0 <= j <= 64.

    Built by half-angle descent from the exact anchors cos(pi) = -1 and
    cos(pi/3) = 1/2, using only cancellation-free recurrences, so the
    relative error stays flat as the angle shrinks.
    """
    _check_frac_args(j, q)
    t = _half_angle(j, q)
    return t.cos, t.sin


def versine_pi_frac(j: int, q: int) -> mpfr:
    """1 - cos(pi / (q * 2**j)) from the same descent as :func:`cospi_frac`."""
    _check_frac_args(j, q)
    return _half_angle(j, q).versine


def _check_small(x):
    with extended():
        too_big = abs(x) > pi_ext()
    if too_big:
        raise ValueError("sincos_small needs |x| <= pi; reduce the angle first")


def sincos_small(x) -> tuple[mpfr, mpfr]:
    """(cos x, sin x) for |x| <= pi."""
    x = ext(x)
    _finite(x)
    _check_small(x)
    s, c = _CONTEXT.sin_cos(x)
    return c, s


def one_minus_cos(x) -> mpfr:
    """1 - cos x evaluated as 2 sin^2(x/2)."""
    x = ext(x)
    _finite(x)
    _check_small(x)
    with extended():
        s = gmpy2.sin(x / 2)
        return 2 * s * s


def _trig_quarter(num: int, den: int) -> Trig:
    # 0 <= num/den <= 1/4, so cos >= 1/sqrt(2) and the versine form is stable
    if num == 0:
        with extended():
            return Trig(mpfr(1), mpfr(0), mpfr(0))
    with extended():
        x = pi_ext() * num / den
        s, c = gmpy2.sin_cos(x)
        return Trig(c, s, s * s / (1 + c))


def sincos_pi_fraction(num: int, den: int) -> Trig:
    """cos, sin and versine of the angle pi*num/den, exact rational input.

    The angle is reduced with integer arithmetic (periodicity, parity,
    supplement, complement) down to [0, pi/4] before any rounding happens,
    so angles like pi*(2**40 mod 2n)/n keep full relative accuracy.
    """
    if den <= 0:
        raise ValueError("denominator must be positive")
    r = num % (2 * den)
    if r > den:
        r -= 2 * den
    sign = -1 if r < 0 else 1
    r = abs(r)
    # now theta = pi*r/den in [0, pi]
    supplement = 2 * r > den
    if supplement:
        r = den - r
    # phi = pi*r/den in [0, pi/2]
    if 4 * r > den:
        base = _trig_quarter(den - 2 * r, 2 * den)
        with extended():
            c, s, v = base.sin, base.cos, 1 - base.sin
    else:
        c, s, v = _trig_quarter(r, den)
    # unary minus rounds to the active context too
    with extended():
        if supplement:
            c, v = -c, 1 + c
        if sign < 0:
            s = -s
    return Trig(c, s, v)


def to_decimal(x, digits: int = 30) -> str:
    """Round-to-nearest decimal string with ``digits`` significant digits."""
    if not 1 <= digits <= 40:
        raise ValueError("digits must be in [1, 40]")
    x = mpfr(x) if not isinstance(x, mpfr) else x
    if gmpy2.is_nan(x):
        return "NaN"
    if gmpy2.is_infinite(x):
        return "Infinity" if x > 0 else "-Infinity"
    if x == 0:
        return "0"
    num, den = x.as_integer_ratio()
    ctx = Context(prec=digits, rounding=ROUND_HALF_EVEN, Emin=-999999, Emax=999999)
    d = ctx.divide(Decimal(int(num)), Decimal(int(den)))
    return f"{d:.{digits - 1}e}"


def from_decimal(s: str) -> mpfr:
    with extended():
        return mpfr(s.strip())

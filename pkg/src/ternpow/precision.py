"""Certified real arithmetic for every inexact decision in the package.

Real-valued comparisons (log ratios, fractional parts, interval endpoints)
are never decided on bare floats.  Each quantity is evaluated as an interval
enclosure (mpmath's ``iv`` context); a decision is accepted only when the
enclosure separates cleanly from the threshold, and otherwise the working
precision doubles up to a configurable cap.  Quantities that are exactly
representable (integers, dyadic rationals) enter the intervals exactly, so
an escalation loop can only stall on a genuine tie, which callers rule out
arithmetically before asking.
"""

from __future__ import annotations

import math
import os
from contextlib import contextmanager
from fractions import Fraction
from typing import Callable, TypeVar

from mpmath import iv, mp

from .errors import PrecisionError


@contextmanager
def iv_prec(prec: int):
    """Temporarily set the interval context precision (iv lacks workprec)."""
    saved = iv.prec
    iv.prec = prec
    try:
        yield iv
    finally:
        iv.prec = saved

# Working precision floor and default escalation cap, in bits.  The cap can
# be overridden per call or process-wide through TERNARY_PRECISION_CAP.
MIN_PRECISION = 256
DEFAULT_PRECISION_CAP = 1 << 16

_T = TypeVar("_T")


def precision_cap(override: int | None = None) -> int:
    """Resolve the active precision cap (bits), honoring the environment."""
    if override is not None:
        cap = int(override)
    else:
        env = os.environ.get("TERNARY_PRECISION_CAP")
        cap = int(env) if env else DEFAULT_PRECISION_CAP
    if cap < MIN_PRECISION:
        raise ValueError(f"precision cap {cap} below minimum {MIN_PRECISION}")
    return cap


def escalate(
    attempt: Callable[[int], _T | None],
    *,
    start: int = MIN_PRECISION,
    cap: int | None = None,
    what: str = "certified decision",
) -> _T:
    """Run ``attempt`` at doubling precisions until it returns a result.

    ``attempt(prec)`` returns None when the enclosure at ``prec`` bits is too
    wide to decide.  Raises PrecisionError once the cap is exceeded.
    """
    limit = precision_cap(cap)
    prec = max(MIN_PRECISION, start)
    while prec <= limit:
        result = attempt(prec)
        if result is not None:
            return result
        prec *= 2
    raise PrecisionError(f"{what} still ambiguous at cap {limit} bits")


def _raw_to_fraction(raw) -> Fraction:
    sign, man, exp, _ = raw
    man, exp = int(man), int(exp)  # backend may hand out gmpy2.mpz
    if man == 0 and exp != 0:
        raise ValueError("non-finite value has no rational form")
    value = Fraction(man, 1) * Fraction(2) ** exp
    return -value if sign else value


def mpf_to_fraction(x) -> Fraction:
    """Exact rational value of an mpmath float (no re-rounding)."""
    if isinstance(x, int):
        return Fraction(x)
    return _raw_to_fraction(x._mpf_)


def exact_mpf(man: int, shift: int):
    """The exact float man * 2^shift (no rounding; workprec covers man)."""
    with mp.workprec(max(abs(man).bit_length(), 8) + 4):
        return mp.mpf(man) * mp.mpf(2) ** shift


def fraction_to_iv(fr: Fraction, prec: int):
    """Interval enclosing an exact rational, with outward directed rounding.

    Builds dyadic endpoints by integer shifts so the enclosure never relies
    on a library rounding mode: lo = floor(fr * 2^prec) / 2^prec, hi is the
    matching ceiling.
    """
    num, den = fr.numerator, fr.denominator
    scaled = num << prec
    lo_man = scaled // den  # floor works for either sign
    hi_man = lo_man if lo_man * den == scaled else lo_man + 1
    with iv_prec(prec + 8):
        return iv.mpf([exact_mpf(lo_man, -prec), exact_mpf(hi_man, -prec)])


def iv_endpoints(x) -> tuple[Fraction, Fraction]:
    """Exact rational endpoints of an interval (raw, no re-rounding)."""
    raw_a, raw_b = x._mpi_
    return _raw_to_fraction(raw_a), _raw_to_fraction(raw_b)


def alpha0_iv(prec: int):
    """Enclosure of log 2 / log 3 at ``prec`` bits."""
    with iv_prec(prec):
        return iv.log(2) / iv.log(3)


def log3_iv(value: int | Fraction, prec: int):
    """Enclosure of log base 3 of a positive exact rational."""
    fr = Fraction(value)
    if fr <= 0:
        raise ValueError("log of non-positive value")
    with iv_prec(prec):
        x = fraction_to_iv(fr, prec)
        return iv.log(x) / iv.log(3)


def alpha0_mpf(prec: int):
    """Round-to-nearest float for log 2 / log 3 at ``prec`` bits."""
    with mp.workprec(prec):
        return mp.log(2) / mp.log(3)


def certified_sign(
    make: Callable[[int], object],
    *,
    start: int = MIN_PRECISION,
    cap: int | None = None,
    what: str = "sign",
) -> int:
    """Sign of a provably nonzero real given by interval evaluations."""

    def attempt(prec: int) -> int | None:
        x = make(prec)
        lo, hi = iv_endpoints(x)
        if lo > 0:
            return 1
        if hi < 0:
            return -1
        return None

    return escalate(attempt, start=start, cap=cap, what=what)


def certified_less_than(
    make: Callable[[int], object],
    threshold: Fraction,
    *,
    start: int = MIN_PRECISION,
    cap: int | None = None,
    what: str = "comparison",
) -> bool:
    """Decide x < threshold for an interval-valued x that never ties."""

    def attempt(prec: int) -> bool | None:
        lo, hi = iv_endpoints(make(prec))
        if hi < threshold:
            return True
        if lo > threshold:
            return False
        return None

    return escalate(attempt, start=start, cap=cap, what=what)


def certified_floor(
    make: Callable[[int], object],
    *,
    start: int = MIN_PRECISION,
    cap: int | None = None,
    what: str = "floor",
) -> int:
    """Floor of an interval-valued real that is provably non-integral."""

    def attempt(prec: int) -> int | None:
        lo, hi = iv_endpoints(make(prec))
        flo = lo.numerator // lo.denominator
        fhi = hi.numerator // hi.denominator
        return flo if flo == fhi else None

    return escalate(attempt, start=start, cap=cap, what=what)


def certified_ceil(
    make: Callable[[int], object],
    *,
    start: int = MIN_PRECISION,
    cap: int | None = None,
    what: str = "ceil",
) -> int:
    return -certified_floor(lambda p: -make(p), start=start, cap=cap, what=what)


def compare_power3_power2(p: int, q: int, *, cap: int | None = None) -> int:
    """Exact sign of 3^p - 2^q.

    Small exponents compare as literal big integers.  Large exponents (the
    deep continued-fraction convergents make the literal powers astronomically
    wide) compare through a certified enclosure of p*log(3) - q*log(2), which
    is nonzero for every (p, q) != (0, 0) since no power of 3 equals a power
    of 2.
    """
    if p == 0 and q == 0:
        return 0
    if max(p * 2, q) <= 1 << 21:  # literal powers stay under ~0.5 MB
        a = 3**p
        b = 1 << q
        return (a > b) - (a < b)

    def make(prec: int):
        with iv_prec(prec):
            return p * iv.log(3) - q * iv.log(2)

    return certified_sign(make, what=f"sign(3^{p} - 2^{q})", cap=cap)


def ulp(x, prec: int):
    """Unit in the last place of a nonzero float at ``prec`` bits."""
    m = abs(mp.mpf(x))
    if m == 0:
        raise ValueError("ulp of zero")
    return mp.mpf(2) ** (mp.mag(m) - prec)


def math_floor_log3(x: int) -> int:
    """Exact floor(log3(x)) for a positive integer, by integer comparison."""
    if x <= 0:
        raise ValueError("positive integer required")
    if x < 3:
        return 0
    # float estimate, then correct by exact comparisons in both directions
    if x.bit_length() < 500_000:
        e = max(0, int(math.log(x, 3)) - 2)
    else:
        e = max(0, int(x.bit_length() * 0.63092975) - 4)
    p = 3**e
    while p > x:
        p //= 3
        e -= 1
    while p * 3 <= x:
        p *= 3
        e += 1
    return e


def ternary_length(x: int) -> int:
    """Number of base-3 digits of x (0 has zero digits)."""
    return 0 if x == 0 else math_floor_log3(x) + 1

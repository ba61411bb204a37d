"""Exact base-3 arithmetic on canonical digit vectors.

Digit vectors are stored least-significant first so carries propagate
forward and low-order digit tests are O(1).  The empty vector is zero, and
zero omits every digit.  Serialization is most-significant first over the
alphabet {0,1,2} with no separators, e.g. 256 <-> "100111".
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator

from .errors import InsufficientDigits

_VALID = (0, 1, 2)


def int_to_digits(n: int) -> tuple[int, ...]:
    """Base-3 digits of a nonnegative integer, least-significant first."""
    if n < 0:
        raise ValueError("negative value has no ternary digit vector")
    out: list[int] = []
    while n:
        n, d = divmod(n, 3)
        out.append(d)
    return tuple(out)


def digits_to_int(digits: Iterable[int]) -> int:
    value = 0
    for d in reversed(tuple(digits)):
        value = value * 3 + d
    return value


def int_omits_digit(n: int, digit: int) -> bool:
    """Whether the ternary expansion of n >= 0 omits ``digit``.

    Scans from the least-significant end and stops at the first hit, so the
    expected cost on random input is O(1) digits.  Zero omits every digit.
    """
    if digit not in _VALID:
        raise ValueError(f"not a ternary digit: {digit!r}")
    if n < 0:
        raise ValueError("negative value")
    while n:
        n, d = divmod(n, 3)
        if d == digit:
            return False
    return True


class TernaryNat:
    """A natural number as a canonical ternary digit vector.

    Canonical means every digit is in {0,1,2} and the most-significant
    stored digit is nonzero; the empty vector denotes zero.
    """

    __slots__ = ("_digits",)

    def __init__(self, digits: Iterable[int] = ()):
        ds = tuple(digits)
        for d in ds:
            if d not in _VALID:
                raise ValueError(f"not a ternary digit: {d!r}")
        if ds and ds[-1] == 0:
            raise ValueError("most-significant digit must be nonzero")
        self._digits = ds

    @classmethod
    def from_int(cls, n: int) -> "TernaryNat":
        return cls(int_to_digits(n))

    @classmethod
    def parse(cls, text: str) -> "TernaryNat":
        """Parse a most-significant-first digit string over {0,1,2}.

        Leading zeros are tolerated and canonicalized away; any other
        character is rejected.
        """
        if not isinstance(text, str) or text == "":
            raise ValueError("expected a nonempty ternary digit string")
        if any(c not in "012" for c in text):
            raise ValueError(f"invalid ternary digit string: {text!r}")
        stripped = text.lstrip("0")
        return cls(int(c) for c in reversed(stripped))

    @property
    def digits(self) -> tuple[int, ...]:
        """Digits least-significant first; empty for zero."""
        return self._digits

    def to_int(self) -> int:
        return digits_to_int(self._digits)

    def is_zero(self) -> bool:
        return not self._digits

    @property
    def num_digits(self) -> int:
        return len(self._digits)

    def digit(self, i: int) -> int:
        """Digit at position i (3^i place); positions past the top are 0."""
        if i < 0:
            raise ValueError("negative digit position")
        return self._digits[i] if i < len(self._digits) else 0

    def __str__(self) -> str:
        if not self._digits:
            return "0"
        return "".join(str(d) for d in reversed(self._digits))

    def __repr__(self) -> str:
        return f"TernaryNat({str(self)!r})"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, TernaryNat) and self._digits == other._digits

    def __hash__(self) -> int:
        return hash(("TernaryNat", self._digits))

    def __iter__(self) -> Iterator[int]:
        return iter(self._digits)


def double(x: TernaryNat) -> TernaryNat:
    """Multiply by two with a single carry pass."""
    out: list[int] = []
    carry = 0
    for d in x.digits:
        t = 2 * d + carry
        carry, r = divmod(t, 3)
        out.append(r)
    while carry:
        carry, r = divmod(carry, 3)
        out.append(r)
    return TernaryNat(out)


def mul_small(x: TernaryNat, m: int) -> TernaryNat:
    """Multiply a digit vector by a nonnegative machine integer."""
    if m < 0:
        raise ValueError("negative multiplier")
    if m == 0:
        return TernaryNat()
    out: list[int] = []
    carry = 0
    for d in x.digits:
        t = d * m + carry
        carry, r = divmod(t, 3)
        out.append(r)
    while carry:
        carry, r = divmod(carry, 3)
        out.append(r)
    return TernaryNat(out)


def pow2(n: int) -> TernaryNat:
    """Ternary expansion of 2^n, built by n successive doublings."""
    if n < 0:
        raise ValueError("negative exponent")
    x = TernaryNat((1,))
    for _ in range(n):
        x = double(x)
    return x


def omits_digit(x: TernaryNat, digit: int) -> bool:
    """Whether the expansion omits ``digit``; zero omits every digit."""
    if digit not in _VALID:
        raise ValueError(f"not a ternary digit: {digit!r}")
    return digit not in x.digits


def leading_digits(x: TernaryNat, k: int) -> str:
    """The k most-significant digits as a string; error if fewer exist."""
    if k <= 0:
        raise ValueError("k must be positive")
    if x.num_digits < k:
        raise InsufficientDigits(f"value has {x.num_digits} digits, need {k}")
    ds = x.digits
    return "".join(str(ds[len(ds) - 1 - i]) for i in range(k))


@dataclass(frozen=True)
class DyadicRational:
    """A positive rational of the form numerator / 2^exponent.

    Canonical: numerator odd, or exponent zero.  These are the spacings
    lambda for which floor(lambda * 2^n) stays exactly computable.
    """

    numerator: int
    exponent: int

    def __post_init__(self):
        if self.numerator <= 0:
            raise ValueError("numerator must be positive")
        if self.exponent < 0:
            raise ValueError("exponent must be nonnegative")
        if self.exponent and self.numerator % 2 == 0:
            raise ValueError("not canonical: numerator even with exponent > 0")

    @classmethod
    def from_pair(cls, numerator: int, exponent: int) -> "DyadicRational":
        """Canonicalize numerator / 2^exponent."""
        if numerator <= 0:
            raise ValueError("numerator must be positive")
        while exponent > 0 and numerator % 2 == 0:
            numerator //= 2
            exponent -= 1
        return cls(numerator, exponent)

    @classmethod
    def parse(cls, text: str) -> "DyadicRational":
        """Parse 'A', 'A/2^s', or 'A/B' with B a power of two."""
        text = text.strip()
        if "/" not in text:
            return cls.from_pair(int(text), 0)
        num_s, den_s = text.split("/", 1)
        num = int(num_s)
        den_s = den_s.strip()
        if den_s.startswith("2^"):
            return cls.from_pair(num, int(den_s[2:]))
        den = int(den_s)
        if den <= 0 or den & (den - 1):
            raise ValueError(f"denominator must be a power of two: {text!r}")
        return cls.from_pair(num, den.bit_length() - 1)

    @property
    def value(self) -> Fraction:
        return Fraction(self.numerator, 1 << self.exponent)

    def __str__(self) -> str:
        if self.exponent == 0:
            return str(self.numerator)
        return f"{self.numerator}/2^{self.exponent}"


def floor_times_pow2(lam: DyadicRational, n: int) -> int:
    """floor(lam * 2^n) as a plain integer (pure shifts, no rounding)."""
    t = n - lam.exponent
    return lam.numerator << t if t >= 0 else lam.numerator >> (-t)


def floor_lambda_pow2(lam: DyadicRational, n: int) -> TernaryNat:
    """Ternary expansion of floor(lam * 2^n)."""
    if n < 0:
        raise ValueError("negative exponent")
    return TernaryNat.from_int(floor_times_pow2(lam, n))


def next_omitting(x: int, forbidden: int) -> int:
    """Smallest y >= x whose ternary expansion omits ``forbidden``.

    Walks the digits from the most-significant end; at the first forbidden
    digit the number must grow there or to the left, so bump the lowest
    prefix position that can still increase and fill the rest with the
    smallest allowed digit.
    """
    if forbidden not in _VALID:
        raise ValueError(f"not a ternary digit: {forbidden!r}")
    if x < 0:
        raise ValueError("negative value")
    low = 0 if forbidden != 0 else 1
    ds = list(int_to_digits(x))[::-1]  # most-significant first
    first = next((i for i, d in enumerate(ds) if d == forbidden), None)
    if first is None:
        return x
    i = first
    while True:
        nxt = ds[i] + 1
        if nxt == forbidden:
            nxt += 1
        if nxt <= 2:
            out = ds[:i] + [nxt] + [low] * (len(ds) - i - 1)
            return digits_to_int(reversed(out))
        if i == 0:
            lead = 1 if forbidden != 1 else 2
            return digits_to_int(reversed([lead] + [low] * len(ds)))
        i -= 1


def prev_omitting(x: int, forbidden: int) -> int:
    """Largest 0 <= y <= x whose ternary expansion omits ``forbidden``.

    Mirror of next_omitting: at the first forbidden digit the number must
    shrink, so lower the deepest prefix position that can still decrease
    and fill the rest with the largest allowed digit.  Zero omits every
    digit, so a result always exists.
    """
    if forbidden not in _VALID:
        raise ValueError(f"not a ternary digit: {forbidden!r}")
    if x < 0:
        raise ValueError("negative value")
    high = 2 if forbidden != 2 else 1
    ds = list(int_to_digits(x))[::-1]
    first = next((i for i, d in enumerate(ds) if d == forbidden), None)
    if first is None:
        return x
    i = first
    while True:
        prv = ds[i] - 1
        if prv == forbidden:
            prv -= 1
        if prv >= 0:
            out = ds[:i] + [prv] + [high] * (len(ds) - i - 1)
            return digits_to_int(reversed(out))
        if i == 0:
            # every admissible value needs fewer digits
            return digits_to_int([high] * (len(ds) - 1))
        i -= 1


def count_omitting_upto(x: int, forbidden: int) -> int:
    """Number of integers in [0, x] whose ternary expansion omits ``forbidden``.

    Digit walk from the most-significant end: at each position, count the
    completions below the current digit, then continue only while the prefix
    itself stays admissible.  Zero's expansion is empty and always counts.
    """
    if forbidden not in _VALID:
        raise ValueError(f"not a ternary digit: {forbidden!r}")
    if x < 0:
        return 0
    ds = list(int_to_digits(x))[::-1]
    n = len(ds)
    if n == 0:
        return 1
    allowed = [d for d in _VALID if d != forbidden]
    lead = [d for d in allowed if d != 0]
    # 1 for zero, plus all shorter admissible expansions
    total = 1 + sum(len(lead) * len(allowed) ** (length - 1) for length in range(1, n))
    for i, d in enumerate(ds):
        pool = lead if i == 0 else allowed
        total += sum(1 for a in pool if a < d) * len(allowed) ** (n - 1 - i)
        if d == forbidden or (i == 0 and d == 0):
            return total
    return total + 1

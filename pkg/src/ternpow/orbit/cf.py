"""Exact continued fraction of log3(2).

Partial quotients come from a subtractive ladder over numbers of the form
2^i * 3^j: each quotient is the largest m with B^m <= A, decided by the sign
of an integer combination of log 2 and log 3.  Small combinations compare as
literal big integers; deep ones go through certified interval enclosures, so
no decision ever rests on unchecked floating point.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..precision import compare_power3_power2


def _sign_pow23(i: int, j: int, what: str = "") -> int:
    """Exact sign of i*log(2) + j*log(3), i.e. of 2^i * 3^j - 1."""
    if i >= 0 and j >= 0:
        return 1 if (i or j) else 0
    if i <= 0 and j <= 0:
        return -1 if (i or j) else 0
    if j > 0:
        return compare_power3_power2(j, -i)
    return -compare_power3_power2(-j, i)


@dataclass(frozen=True)
class CFExpansion:
    """Partial quotients a0..aD and exact convergents (p_i, q_i) of a real
    number in (0,1); a0 = 0 and the usual recurrences are enforced."""

    partial_quotients: tuple[int, ...]
    convergents: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        a = self.partial_quotients
        c = self.convergents
        if len(a) != len(c) or not a:
            raise ValueError("quotients and convergents must align")
        if a[0] != 0 or any(x < 1 for x in a[1:]):
            raise ValueError("expected a0 = 0 and positive later quotients")
        pm1, qm1 = 1, 0  # (p_{-1}, q_{-1})
        pm2, qm2 = 0, 1
        for i, (ai, (p, q)) in enumerate(zip(a, c)):
            if p != ai * pm1 + pm2 or q != ai * qm1 + qm2:
                raise ValueError(f"convergent recurrence fails at index {i}")
            if pm1 * q - p * qm1 != (-1) ** i:
                raise ValueError(f"determinant fails at index {i}")
            pm2, qm2, pm1, qm1 = pm1, qm1, p, q

    @classmethod
    def from_quotients(cls, quotients: tuple[int, ...] | list[int]) -> "CFExpansion":
        qs = tuple(quotients)
        pm1, qm1, pm2, qm2 = 1, 0, 0, 1
        conv = []
        for ai in qs:
            p = ai * pm1 + pm2
            q = ai * qm1 + qm2
            conv.append((p, q))
            pm2, qm2, pm1, qm1 = pm1, qm1, p, q
        return cls(qs, tuple(conv))

    @property
    def depth(self) -> int:
        return len(self.partial_quotients) - 1

    def p(self, n: int) -> int:
        if n == -1:
            return 1
        return self.convergents[n][0]

    def q(self, n: int) -> int:
        if n == -1:
            return 0
        return self.convergents[n][1]


def cf_log3_2(depth: int) -> CFExpansion:
    """First ``depth`` partial quotients (beyond a0 = 0) of log3(2).

    The ladder state is a pair A > B > 1, both of the form 2^i * 3^j, with
    the current remainder equal to log_B(A); the next quotient is
    floor(log_B(A)), found by exponential-then-binary search on exact sign
    tests.
    """
    if depth < 1:
        raise ValueError("depth must be >= 1")
    quotients = [0]
    # A = 3 = 2^0 3^1, B = 2 = 2^1 3^0: remainder log_2(3)
    iA, jA = 0, 1
    iB, jB = 1, 0

    def cmp_Bm_A(m: int) -> int:
        # sign of B^m - A
        return _sign_pow23(m * iB - iA, m * jB - jA)

    for _ in range(depth):
        hi = 1
        while cmp_Bm_A(hi) <= 0:
            hi *= 2
        lo = hi // 2  # B^lo <= A < B^hi
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if cmp_Bm_A(mid) <= 0:
                lo = mid
            else:
                hi = mid
        a = lo
        quotients.append(a)
        iA, jA, iB, jB = iB, jB, iA - a * iB, jA - a * jB
        if iB == 0 and jB == 0:
            raise ArithmeticError("remainder vanished; the target is rational")
    return CFExpansion.from_quotients(quotients)


def check_lemma22(cf: CFExpansion) -> list[bool]:
    """Per-index verdicts of q_n <= 1200 * q_{n-1}^13.3 for n = 1..depth.

    The comparison is exact: both sides are raised to the 10th power, turning
    13.3 into the integer exponent 133.
    """
    if cf.depth < 1:
        raise ValueError("need at least two convergents")
    out = []
    for n in range(1, cf.depth + 1):
        qn, qn1 = cf.q(n), cf.q(n - 1)
        out.append(qn**10 <= 1200**10 * qn1**133)
    return out

"""Searches and scans over the carry machine.

Membership of M in the "some positive integer survives" class is decidable:
a positive N with both N and every M_i*N digit-2-free corresponds to a walk
of the carry machine ending in digit 1 whose final carry tuple consists of
digit-2-free integers (the carries are exactly the unwritten high digits of
the products).  The bounded ascending search is kept alongside as an
independent oracle and as the contract-level entry point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from ..ternary import int_omits_digit
from .automaton import (
    DEFAULT_STATE_LIMIT,
    CarryAutomaton,
    MultiplierSet,
    build_automaton,
    trim,
)
from .dimension import (
    _component_rows,
    _has_cycle,
    _is_bare_cycle,
    strongly_connected_components,
)

LOG3_2 = math.log(2) / math.log(3)
DEFAULT_SCAN_LIMIT = 3000


def _ceil_log3(x: int) -> int:
    """Smallest t >= 0 with 3^t >= x, for x >= 1."""
    if x < 1:
        raise ValueError("positive integer required")
    t, p = 0, 1
    while p < x:
        p *= 3
        t += 1
    return t


def _bound_denominator(n: int, m_max: int) -> int:
    # N*M_k = 1 means no constraint at all: the set is the full Cantor set
    return max(1, _ceil_log3(n * m_max))


@dataclass(frozen=True)
class WitnessResult:
    """Smallest positive N with N and all M_i*N digit-2-free, if any.

    bound = log3(2) / ceil(log3(N * M_k)) is the dimension lower bound the
    witness certifies.  exhausted tells how a miss should be read: True
    means the reachability decision proved no N exists at any size, False
    means only that none appeared below the search ceiling.
    """

    multipliers: tuple[int, ...]
    found: bool
    n: int | None
    digits: tuple[int, ...] | None
    bound_denominator: int | None
    exhausted: bool
    checked_up_to: int | None = None

    @property
    def bound(self) -> float | None:
        if self.bound_denominator is None:
            return None
        return LOG3_2 / self.bound_denominator


def _is_flush_state(carries: tuple[int, ...]) -> bool:
    # the carry tuple is the unwritten high part of each product; the walk
    # yields a 2-free integer product exactly when every carry is 2-free
    return all(int_omits_digit(c, 2) for c in carries)


def _flush_targets(a: CarryAutomaton) -> set[int]:
    return {i for i, c in enumerate(a.states) if _is_flush_state(c)}


def _witness_exists(a: CarryAutomaton) -> bool:
    """Reachability decision: some walk ends in digit 1 at a flush state."""
    flush = _flush_targets(a)
    seen = {0}
    frontier = [0]
    while frontier:
        nxt = []
        for u in frontier:
            to1 = a.transitions[u][1]
            if to1 is not None and to1 in flush:
                return True
            for t in a.transitions[u]:
                if t is not None and t not in seen:
                    seen.add(t)
                    nxt.append(t)
        frontier = nxt
    return False


def _preimage(a: CarryAutomaton, digit: int, targets: set[int]) -> set[int]:
    return {
        u
        for u in range(a.num_states)
        if a.transitions[u][digit] in targets
    }


def smallest_witness(ms, state_limit: int = DEFAULT_STATE_LIMIT) -> WitnessResult:
    """Exact decision plus the minimal witness when one exists.

    Minimality: breadth-first distances give the least digit count L, and
    within length L the digits are chosen greedily from the most significant
    end (each 0 saves more than all lower positions combined), with
    feasibility checked against the exact forward-reachable layer sets.
    """
    a = ms if isinstance(ms, CarryAutomaton) else build_automaton(ms, state_limit)
    flush = _flush_targets(a)

    # layered BFS; layers[j] = states reachable in exactly j steps
    layers = [{0}]
    seen = {0}
    best_len: int | None = None
    while True:
        current = layers[-1]
        j = len(layers) - 1
        if any(
            a.transitions[u][1] is not None and a.transitions[u][1] in flush
            for u in current
        ):
            best_len = j + 1
            break
        nxt = set()
        for u in current:
            for t in a.transitions[u]:
                if t is not None and t not in seen:
                    seen.add(t)
                    nxt.add(t)
        if not nxt:
            return WitnessResult(
                multipliers=a.multipliers,
                found=False,
                n=None,
                digits=None,
                bound_denominator=None,
                exhausted=True,
            )
        layers.append(nxt)

    # forward layers use cumulative reachability: position j of the witness
    # may sit at any state reachable in exactly j steps
    exact = [{0}]
    for _ in range(best_len - 1):
        prev = exact[-1]
        step = set()
        for u in prev:
            for t in a.transitions[u]:
                if t is not None:
                    step.add(t)
        exact.append(step)

    digits = [0] * best_len
    digits[best_len - 1] = 1
    allowed = _preimage(a, 1, flush)  # states that may host the leading 1
    for j in range(best_len - 2, -1, -1):
        zero_side = _preimage(a, 0, allowed)
        if exact[j] & zero_side:
            digits[j] = 0
            allowed = zero_side
        else:
            digits[j] = 1
            allowed = _preimage(a, 1, allowed)
            if not (exact[j] & allowed):
                raise AssertionError("witness reconstruction lost feasibility")

    n = sum(d * 3**j for j, d in enumerate(digits))
    end = a.walk(digits)
    if end is None or end not in flush:
        raise AssertionError("reconstructed witness rejected by the machine")
    for m in a.multipliers:
        if not int_omits_digit(n * m, 2):
            raise AssertionError("reconstructed witness fails the digit check")

    return WitnessResult(
        multipliers=a.multipliers,
        found=True,
        n=n,
        digits=tuple(digits),
        bound_denominator=_bound_denominator(n, a.multipliers[-1]),
        exhausted=True,
    )


def _free_integers_ascending(n_max: int):
    """Positive digit-2-free integers in increasing order.

    The t-th such integer reads the binary digits of t as ternary digits, so
    an ordinary counter enumerates them without any digit bookkeeping.
    """
    t = 1
    while True:
        n = int(bin(t)[2:], 3)
        if n > n_max:
            return
        yield n
        t += 1


def theorem17_search(
    ms, n_max: int, state_limit: int = DEFAULT_STATE_LIMIT
) -> WitnessResult:
    """Bounded ascending search for the smallest witness N <= n_max.

    Runs over digit-2-free N in increasing order and tests every product
    directly on integers; a miss only says no witness exists below n_max.
    """
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    if not isinstance(ms, MultiplierSet):
        ms = MultiplierSet.of(ms)
    mults = ms.normalized().multipliers
    for n in _free_integers_ascending(n_max):
        if all(int_omits_digit(n * m, 2) for m in mults):
            return WitnessResult(
                multipliers=mults,
                found=True,
                n=n,
                digits=_ternary_digits(n),
                bound_denominator=_bound_denominator(n, mults[-1]),
                exhausted=False,
                checked_up_to=n_max,
            )
    return WitnessResult(
        multipliers=mults,
        found=False,
        n=None,
        digits=None,
        bound_denominator=None,
        exhausted=False,
        checked_up_to=n_max,
    )


def _ternary_digits(n: int) -> tuple[int, ...]:
    out = []
    while n:
        out.append(n % 3)
        n //= 3
    return tuple(out)


@dataclass(frozen=True)
class GreedyElement:
    """A length-r admissible prefix with leading digit 1 (least position)."""

    m: int
    digits: tuple[int, ...]
    value: int
    backtracks: int


def greedy_element(
    m: int, r: int, pure_greedy: bool = False, state_limit: int = DEFAULT_STATE_LIMIT
) -> GreedyElement:
    """Digit string d0=1, d1..d_{r-1} with the low r digits of m*value 2-free.

    Prefers digit 0 at every step.  By default a depth-first search with
    failure memoization backtracks past stalls; pure_greedy=True applies the
    single-step rule only and raises if it ever stalls, exposing whether the
    greedy choice alone suffices (an open experiment).  For a single
    multiplier coprime to 3 a stall is actually impossible: digit 0 dies only
    when c = 2 mod 3 and digit 1 only when m + c = 2 mod 3, which cannot
    both hold, so every state keeps an exit and the flag exists to document
    that fact empirically.
    """
    if m % 3 != 1:
        raise ValueError("m must be congruent to 1 mod 3")
    if r < 1:
        raise ValueError("r must be >= 1")
    a = build_automaton(MultiplierSet.of([m]), state_limit)

    first = a.transitions[0][1]
    if first is None:
        raise AssertionError("digit 1 rejected at start despite m % 3 == 1")

    digits = [1]
    if pure_greedy:
        state = first
        for _ in range(r - 1):
            to0, to1 = a.transitions[state]
            if to0 is not None:
                digits.append(0)
                state = to0
            elif to1 is not None:
                digits.append(1)
                state = to1
            else:
                raise ValueError(
                    f"pure greedy stalled for m={m} after {len(digits)} digits"
                )
        return GreedyElement(
            m=m,
            digits=tuple(digits),
            value=sum(d * 3**j for j, d in enumerate(digits)),
            backtracks=0,
        )

    # DFS preferring 0, memoizing (state, remaining) dead ends
    failed: set[tuple[int, int]] = set()
    backtracks = 0

    def extend(state: int, remaining: int) -> bool:
        nonlocal backtracks
        if remaining == 0:
            return True
        if (state, remaining) in failed:
            return False
        for d in (0, 1):
            t = a.transitions[state][d]
            if t is None:
                continue
            digits.append(d)
            if extend(t, remaining - 1):
                return True
            digits.pop()
            backtracks += 1
        failed.add((state, remaining))
        return False

    if not extend(first, r - 1):
        raise AssertionError(f"no admissible length-{r} prefix for m={m}")
    return GreedyElement(
        m=m,
        digits=tuple(digits),
        value=sum(d * 3**j for j, d in enumerate(digits)),
        backtracks=backtracks,
    )


@dataclass(frozen=True)
class SigmaSubsetReport:
    """Block-pattern subsets checked against their host machines.

    sigma_a: digits with every odd position 0 (values sum eps_n * 9^n), fed
    to the {1,4} machine.  sigma_b: only each 6-block's low digit free
    (values sum eps_n * 729^n), fed to the {1,4,256} machine.  The implied
    dimension lower bounds are log3(2)/2 and log3(2)/6.
    """

    r: int
    sigma_a_count: int
    sigma_a_all_accepted: bool
    sigma_b_count: int
    sigma_b_all_accepted: bool

    @property
    def bound_a(self) -> float:
        return LOG3_2 / 2

    @property
    def bound_b(self) -> float:
        return LOG3_2 / 6


def _blocks_all_accepted(
    a: CarryAutomaton, blocks: tuple[tuple[int, ...], ...], num_blocks: int
) -> bool:
    """Whether every concatenation of `num_blocks` blocks is accepted.

    Walks sets of states block by block; a None transition anywhere means
    some concrete string is rejected, so acceptance of all strings is
    equivalent to the set walk never dying.
    """
    current = {0}
    for _ in range(num_blocks):
        nxt = set()
        for u in current:
            for block in blocks:
                s: int | None = u
                for d in block:
                    s = a.transitions[s][d]
                    if s is None:
                        return False
                nxt.add(s)
        current = nxt
    return True


def verify_sigma_subsets(r: int) -> SigmaSubsetReport:
    """Check the two block subsets land inside their multiplier machines."""
    if r % 6 != 0 or not (6 <= r <= 36):
        raise ValueError("r must be a multiple of 6 with 6 <= r <= 36")

    machine_a = build_automaton(MultiplierSet.of([1, 4]))
    machine_b = build_automaton(MultiplierSet.of([1, 4, 256]))

    # digits are consumed least-significant first, so each block leads with
    # its free low digit
    blocks_a = ((0, 0), (1, 0))
    blocks_b = ((0, 0, 0, 0, 0, 0), (1, 0, 0, 0, 0, 0))

    return SigmaSubsetReport(
        r=r,
        sigma_a_count=2 ** (r // 2),
        sigma_a_all_accepted=_blocks_all_accepted(machine_a, blocks_a, r // 2),
        sigma_b_count=2 ** (r // 6),
        sigma_b_all_accepted=_blocks_all_accepted(machine_b, blocks_b, r // 6),
    )


def _rho_exceeds_one(trimmed: CarryAutomaton) -> bool:
    """Exact structural test for spectral radius > 1.

    The radius exceeds 1 precisely when some strongly connected component
    with a cycle is more than a bare cycle (two distinct cycles through a
    shared node force exponential path growth).
    """
    comps = strongly_connected_components(trimmed.transitions)
    for comp in comps:
        rows = _component_rows(trimmed, comp)
        if _has_cycle(rows) and not _is_bare_cycle(rows):
            return True
    return False


@dataclass(frozen=True)
class ScanRow:
    m: int
    normalized_m: int
    in_mc: bool
    in_mh: bool
    witness: int | None


@dataclass(frozen=True)
class ScanResult:
    """Classification of every M <= x into the witness and dimension classes.

    in_mc: some positive integer N has N and M*N both digit-2-free (exact
    reachability decision).  in_mh: the admissible set of {1, M} has
    positive dimension (exact structural spectral-radius test).  The strict
    witnesses are the M in the second class but not the first.
    """

    x: int
    rows: tuple[ScanRow, ...]
    mc_count: int
    mh_count: int
    strict: tuple[int, ...]


def _classify_normalized(m: int) -> tuple[bool, bool, int | None]:
    """(in_mc, in_mh, smallest witness) for a 3-coprime multiplier."""
    a = build_automaton(MultiplierSet.of([1, m]))
    in_mh = _rho_exceeds_one(trim(a))
    wit = smallest_witness(a)
    return wit.found, in_mh, wit.n


def scan_problems(
    x: int, limit: int = DEFAULT_SCAN_LIMIT, workers: int = 1
) -> ScanResult:
    """Classify all M = 1..x; powers of 3 inside M never change the class."""
    if x < 1:
        raise ValueError("x must be >= 1")
    if x > limit:
        raise ValueError(f"x exceeds the configured scan limit {limit}")

    def strip3(m: int) -> int:
        while m % 3 == 0:
            m //= 3
        return m

    normals = sorted({strip3(m) for m in range(1, x + 1)})
    if workers > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = dict(zip(normals, pool.map(_classify_normalized, normals)))
    else:
        results = {m: _classify_normalized(m) for m in normals}

    rows = []
    for m in range(1, x + 1):
        in_mc, in_mh, wit = results[strip3(m)]
        rows.append(
            ScanRow(
                m=m,
                normalized_m=strip3(m),
                in_mc=in_mc,
                in_mh=in_mh,
                witness=wit,
            )
        )
    return ScanResult(
        x=x,
        rows=tuple(rows),
        mc_count=sum(1 for r in rows if r.in_mc),
        mh_count=sum(1 for r in rows if r.in_mh),
        strict=tuple(r.m for r in rows if r.in_mh and not r.in_mc),
    )

"""Prefix-growth dimension of the carry machine's language.

The number of accepted length-r prefixes grows like rho^r where rho is the
spectral radius of the trimmed transition graph; log3(rho) is reported as
the Hausdorff dimension of the corresponding 3-adic set, the standard
identification for graph-directed constructions (the identification, not a
re-derivation, is what this module implements).

rho is located exactly when the graph is structurally degenerate (every
strongly connected component a bare cycle gives rho = 1, a fully binary
machine gives rho = 2) and otherwise enclosed by Collatz-Wielandt ratio
bounds evaluated on integer vectors, so the reported interval is certified
rational arithmetic, not floating point.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ..errors import SizeGuardError
from ..precision import iv_endpoints, log3_iv
from .automaton import (
    DEFAULT_STATE_LIMIT,
    CarryAutomaton,
    build_automaton,
    count_prefixes,
    trim,
)

DEFAULT_TARGET_WIDTH = Fraction(1, 10**10)
DEFAULT_PREFIX_DEPTH = 60
_CHARPOLY_STATE_LIMIT = 64


def strongly_connected_components(
    transitions: tuple[tuple[int | None, int | None], ...]
) -> list[list[int]]:
    """Tarjan's algorithm, iterative to dodge recursion limits."""
    n = len(transitions)
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    stack: list[int] = []
    comps: list[list[int]] = []
    counter = 0

    for root in range(n):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        while work:
            v, ei = work[-1]
            if ei == 0:
                index[v] = low[v] = counter
                counter += 1
                stack.append(v)
                on_stack[v] = True
            advanced = False
            edges = [t for t in transitions[v] if t is not None]
            while ei < len(edges):
                w = edges[ei]
                ei += 1
                if index[w] == -1:
                    work[-1] = (v, ei)
                    work.append((w, 0))
                    advanced = True
                    break
                if on_stack[w]:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.append(w)
                    if w == v:
                        break
                comps.append(comp)
            if work:
                u, _ = work[-1]
                low[u] = min(low[u], low[v])
    return comps


def _component_rows(a: CarryAutomaton, nodes: list[int]) -> list[list[int]]:
    """Within-component adjacency as sparse rows of local target indices.

    Every state has at most two out-edges, so rows (with repeats for
    multiplicity) keep all the spectral work linear in the state count.
    """
    pos = {v: i for i, v in enumerate(nodes)}
    rows: list[list[int]] = [[] for _ in nodes]
    for v in nodes:
        for t in a.transitions[v]:
            if t is not None and t in pos:
                rows[pos[v]].append(pos[t])
    return rows


def _is_bare_cycle(rows: list[list[int]]) -> bool:
    """True when every node has exactly one outgoing edge inside the SCC."""
    return all(len(row) == 1 for row in rows)


def _has_cycle(rows: list[list[int]]) -> bool:
    if len(rows) > 1:
        return True  # strongly connected with >1 node
    return 0 in rows[0]


def _cw_bounds(rows: list[list[int]], iterations: int) -> tuple[Fraction, Fraction]:
    """Collatz-Wielandt enclosure of the spectral radius of an irreducible
    component given by sparse rows.

    Power-iterates B = A + I (the shift kills periodicity) on an integer
    vector, renormalizing by shifts to keep entries bounded; the min and max
    of (Bx)_i / x_i enclose rho(B) = rho(A) + 1 exactly for any positive x.
    """
    n = len(rows)

    def apply(x: list[int]) -> list[int]:
        return [x[i] + sum(x[j] for j in rows[i]) for i in range(n)]

    x = [1] * n
    for _ in range(iterations):
        y = apply(x)
        # renormalize to keep the integers from exploding
        shift = max(v.bit_length() for v in y) - 64
        if shift > 0:
            y = [max(1, v >> shift) for v in y]
        x = y
    y = apply(x)
    ratios = [Fraction(y[i], x[i]) for i in range(n)]
    return min(ratios) - 1, max(ratios) - 1


@dataclass(frozen=True)
class DimensionEstimate:
    """log3 of the trimmed machine's growth rate, with a certified enclosure.

    rho_lo/rho_hi bound the spectral radius as exact rationals; lo/hi bound
    log3(rho).  exact is set when rho was identified structurally rather
    than enclosed numerically.  prefix_counts tabulates accepted prefixes of
    the untrimmed machine; slope_gap is |log3(count(R))/R - value|.
    """

    multipliers: tuple[int, ...]
    states_total: int
    states_trimmed: int
    rho_lo: Fraction
    rho_hi: Fraction
    lo: Fraction
    hi: Fraction
    exact: bool
    converged: bool
    prefix_counts: tuple[int, ...]
    slope_gap: float

    @property
    def value(self) -> float:
        return float((self.lo + self.hi) / 2)

    @property
    def positive(self) -> bool:
        """Certified dim > 0."""
        return self.lo > 0

    @property
    def is_zero(self) -> bool:
        """Certified dim = 0."""
        return self.exact and self.rho_lo == self.rho_hi == 1


def _log3_enclosure(fr: Fraction, prec: int = 256) -> tuple[Fraction, Fraction]:
    if fr == 1:
        return Fraction(0), Fraction(0)
    lo, hi = iv_endpoints(log3_iv(fr, prec))
    return lo, hi


def hausdorff_dimension(
    ms,
    target_width: Fraction = DEFAULT_TARGET_WIDTH,
    prefix_depth: int = DEFAULT_PREFIX_DEPTH,
    state_limit: int = DEFAULT_STATE_LIMIT,
    max_iterations: int = 4096,
) -> DimensionEstimate:
    """Dimension estimate for the multiplier set's admissible 3-adic set.

    Structural cases (all SCCs bare cycles -> 0; fully binary machine ->
    log3 2) are exact.  Otherwise each strongly connected component gets a
    Collatz-Wielandt enclosure that is tightened by power iteration until
    the spectral-radius interval is narrower than target_width; failure to
    converge is reported on the result, not raised.
    """
    built = ms if isinstance(ms, CarryAutomaton) else build_automaton(ms, state_limit)
    trimmed = built if built.trimmed else trim(built)

    counts = tuple(count_prefixes(built, r) for r in range(1, prefix_depth + 1))

    if all(t is not None for pair in trimmed.transitions for t in pair):
        # fully binary: rho = 2 exactly, the machine is the unrestricted one
        two = Fraction(2)
        lo, hi = _log3_enclosure(two)
        return DimensionEstimate(
            multipliers=built.multipliers,
            states_total=built.num_states,
            states_trimmed=trimmed.num_states,
            rho_lo=two,
            rho_hi=two,
            lo=lo,
            hi=hi,
            exact=True,
            converged=True,
            prefix_counts=counts,
            slope_gap=_slope_gap(counts, (lo + hi) / 2),
        )

    comps = strongly_connected_components(trimmed.transitions)
    mats = [_component_rows(trimmed, comp) for comp in comps]
    cyclic = [m for m in mats if _has_cycle(m)]
    if all(_is_bare_cycle(m) for m in cyclic):
        # growth is polynomial at best: rho = 1, dimension exactly 0
        one = Fraction(1)
        return DimensionEstimate(
            multipliers=built.multipliers,
            states_total=built.num_states,
            states_trimmed=trimmed.num_states,
            rho_lo=one,
            rho_hi=one,
            lo=Fraction(0),
            hi=Fraction(0),
            exact=True,
            converged=True,
            prefix_counts=counts,
            slope_gap=_slope_gap(counts, Fraction(0)),
        )

    rho_lo = Fraction(1)
    rho_hi = Fraction(1)
    converged = True
    for mat in cyclic:
        if _is_bare_cycle(mat):
            continue
        iterations = 64
        lo, hi = _cw_bounds(mat, iterations)
        while hi - lo > target_width and iterations < max_iterations:
            iterations *= 2
            lo, hi = _cw_bounds(mat, iterations)
        if hi - lo > target_width:
            converged = False
        if lo > rho_lo:
            rho_lo = lo
        if hi > rho_hi:
            rho_hi = hi

    dim_lo = _log3_enclosure(rho_lo)[0]
    dim_hi = _log3_enclosure(rho_hi)[1]
    return DimensionEstimate(
        multipliers=built.multipliers,
        states_total=built.num_states,
        states_trimmed=trimmed.num_states,
        rho_lo=rho_lo,
        rho_hi=rho_hi,
        lo=dim_lo,
        hi=dim_hi,
        exact=False,
        converged=converged,
        prefix_counts=counts,
        slope_gap=_slope_gap(counts, (dim_lo + dim_hi) / 2),
    )


def _slope_gap(counts: tuple[int, ...], value: Fraction) -> float:
    """|log3(count(R))/R - value| at the deepest tabulated R."""
    import math

    if not counts:
        return float("nan")
    r = len(counts)
    c = counts[-1]
    if c == 0:
        return float(value)
    slope = math.log(c) / math.log(3) / r
    return abs(slope - float(value))


def exact_charpoly(ms, state_limit: int = DEFAULT_STATE_LIMIT):
    """Characteristic polynomial of the trimmed adjacency matrix (sympy).

    Only offered for machines small enough that exact symbolic work stays
    quick; larger machines raise SizeGuardError.
    """
    import sympy

    built = ms if isinstance(ms, CarryAutomaton) else build_automaton(ms, state_limit)
    trimmed = built if built.trimmed else trim(built)
    if trimmed.num_states > _CHARPOLY_STATE_LIMIT:
        raise SizeGuardError(
            f"charpoly limited to {_CHARPOLY_STATE_LIMIT} states, "
            f"machine has {trimmed.num_states}"
        )
    n = trimmed.num_states
    mat = [[0] * n for _ in range(n)]
    for v in range(n):
        for t in trimmed.transitions[v]:
            if t is not None:
                mat[v][t] += 1
    x = sympy.Symbol("x")
    return sympy.Matrix(mat).charpoly(x)

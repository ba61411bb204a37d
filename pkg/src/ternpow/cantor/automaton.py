"""Carry automaton for simultaneous digit-2-free multiplication.

A 3-adic integer with digits in {0,1} is fed least-significant digit first;
for each multiplier M the machine tracks the carry of the running product
M * lambda.  On input d with carry c the product emits digit (M*d + c) mod 3
and keeps carry (M*d + c) // 3; the transition exists only when every
multiplier's emitted digit stays in {0,1}.  Accepted length-r strings are
exactly the N < 3^r with {0,1} digits whose products M*N all have
digit-2-free low r digits.

Powers of 3 inside a multiplier only shift the product's digits, so
multipliers are normalized by stripping factors of 3; the multiplier 1
(the constraint that lambda itself avoids the digit 2) is implicit in the
{0,1} input alphabet and is always included.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from ..errors import SizeGuardError

DEFAULT_STATE_LIMIT = 1_000_000


@dataclass(frozen=True)
class MultiplierSet:
    """Strictly increasing positive multipliers."""

    multipliers: tuple[int, ...]

    def __post_init__(self) -> None:
        ms = self.multipliers
        if not ms:
            raise ValueError("need at least one multiplier")
        if any(m < 1 for m in ms):
            raise ValueError("multipliers must be positive")
        if any(a >= b for a, b in zip(ms, ms[1:])):
            raise ValueError("multipliers must be strictly increasing")

    @classmethod
    def of(cls, values) -> "MultiplierSet":
        return cls(tuple(sorted(set(int(v) for v in values))))

    @classmethod
    def parse(cls, text: str) -> "MultiplierSet":
        """Comma-separated list, e.g. "1,7"."""
        parts = [p.strip() for p in text.split(",") if p.strip()]
        if not parts:
            raise ValueError("empty multiplier list")
        return cls.of(int(p) for p in parts)

    def normalized(self) -> "MultiplierSet":
        """Strip powers of 3, dedupe, sort, and include the implicit 1."""
        out = {1}
        for m in self.multipliers:
            while m % 3 == 0:
                m //= 3
            out.add(m)
        return MultiplierSet(tuple(sorted(out)))

    @property
    def is_normalized(self) -> bool:
        return (
            self.multipliers[0] == 1
            and all(m % 3 != 0 for m in self.multipliers)
        )

    def __str__(self) -> str:
        return ",".join(str(m) for m in self.multipliers)


@dataclass(frozen=True)
class CarryAutomaton:
    """Deterministic-per-digit carry machine over the input alphabet {0,1}.

    states[i] is the carry tuple of state i; state 0 is the all-zero start.
    transitions[i] is a (to_on_0, to_on_1) pair with None for a forbidden
    digit.  The all-zero state always loops on digit 0.
    """

    multipliers: tuple[int, ...]
    states: tuple[tuple[int, ...], ...]
    transitions: tuple[tuple[int | None, int | None], ...]
    trimmed: bool = False

    @property
    def num_states(self) -> int:
        return len(self.states)

    def step(self, state: int, digit: int) -> int | None:
        return self.transitions[state][digit]

    def walk(self, digits) -> int | None:
        """Final state after consuming digits LSF, or None if rejected."""
        s: int | None = 0
        for d in digits:
            s = self.transitions[s][d]
            if s is None:
                return None
        return s

    def out_degree(self, state: int) -> int:
        return sum(1 for t in self.transitions[state] if t is not None)

    def to_json(self) -> str:
        payload = {
            "multipliers": list(self.multipliers),
            "trimmed": self.trimmed,
            "start": 0,
            "states": [list(c) for c in self.states],
            "transitions": [
                {"from": i, "digit": d, "to": t}
                for i, pair in enumerate(self.transitions)
                for d, t in enumerate(pair)
                if t is not None
            ],
        }
        return json.dumps(payload, indent=2, sort_keys=True)

    def to_dot(self) -> str:
        lines = ["digraph carries {", "  rankdir=LR;"]
        for i, c in enumerate(self.states):
            label = "(" + ",".join(str(x) for x in c) + ")"
            shape = "doublecircle" if i == 0 else "circle"
            lines.append(f'  s{i} [label="{label}", shape={shape}];')
        for i, pair in enumerate(self.transitions):
            for d, t in enumerate(pair):
                if t is not None:
                    lines.append(f'  s{i} -> s{t} [label="{d}"];')
        lines.append("}")
        return "\n".join(lines)


def _step_carries(
    ms: tuple[int, ...], carries: tuple[int, ...], digit: int
) -> tuple[int, ...] | None:
    out = []
    for m, c in zip(ms, carries):
        t = m * digit + c
        if t % 3 == 2:
            return None
        out.append(t // 3)
    return tuple(out)


def build_automaton(
    ms, state_limit: int = DEFAULT_STATE_LIMIT
) -> CarryAutomaton:
    """Reachable carry machine for a multiplier set.

    Carries stay below their multiplier ((M*1 + M-1) // 3 < M), so the state
    space is finite; discovery past state_limit raises SizeGuardError.
    """
    if not isinstance(ms, MultiplierSet):
        ms = MultiplierSet.of(ms)
    ms = ms.normalized()
    mults = ms.multipliers

    start = tuple(0 for _ in mults)
    index = {start: 0}
    states = [start]
    transitions: list[tuple[int | None, int | None]] = []
    frontier = [start]
    while frontier:
        next_frontier = []
        for carries in frontier:
            pair: list[int | None] = [None, None]
            for d in (0, 1):
                nxt = _step_carries(mults, carries, d)
                if nxt is None:
                    continue
                if nxt not in index:
                    if len(states) >= state_limit:
                        raise SizeGuardError(
                            f"carry machine for {{{ms}}} exceeds "
                            f"{state_limit} states"
                        )
                    index[nxt] = len(states)
                    states.append(nxt)
                    next_frontier.append(nxt)
                pair[d] = index[nxt]
            transitions.append((pair[0], pair[1]))
        frontier = next_frontier
    return CarryAutomaton(
        multipliers=mults,
        states=tuple(states),
        transitions=tuple(transitions),
        trimmed=False,
    )


def trim(a: CarryAutomaton) -> CarryAutomaton:
    """Restrict to states with infinite continuations.

    Repeatedly removes states whose every transition is dead; surviving
    paths are exactly the prefixes extendable forever.  The all-zero start
    state loops on 0 and always survives.
    """
    preds: list[list[int]] = [[] for _ in range(a.num_states)]
    live_out = [0] * a.num_states
    for i, pair in enumerate(a.transitions):
        for t in pair:
            if t is not None:
                preds[t].append(i)
                live_out[i] += 1
    dead = [i for i, n in enumerate(live_out) if n == 0]
    alive = set(range(a.num_states)) - set(dead)
    while dead:
        gone = dead.pop()
        for p in preds[gone]:  # one entry per edge into `gone`
            if p not in alive:
                continue
            live_out[p] -= 1
            if live_out[p] == 0:
                alive.remove(p)
                dead.append(p)
    if 0 not in alive:
        raise AssertionError("start state lost its zero loop")

    keep = sorted(alive)
    remap = {old: new for new, old in enumerate(keep)}
    states = tuple(a.states[i] for i in keep)
    transitions = tuple(
        tuple(
            remap[t] if (t is not None and t in alive) else None
            for t in a.transitions[i]
        )
        for i in keep
    )
    return CarryAutomaton(
        multipliers=a.multipliers,
        states=states,
        transitions=transitions,
        trimmed=True,
    )


def count_prefixes(ms, r: int, state_limit: int = DEFAULT_STATE_LIMIT) -> int:
    """Exact number of accepted length-r digit strings (untrimmed machine)."""
    if r < 0:
        raise ValueError("r must be >= 0")
    a = ms if isinstance(ms, CarryAutomaton) else build_automaton(ms, state_limit)
    vec = [0] * a.num_states
    vec[0] = 1
    for _ in range(r):
        nxt = [0] * a.num_states
        for i, count in enumerate(vec):
            if count == 0:
                continue
            for t in a.transitions[i]:
                if t is not None:
                    nxt[t] += count
        vec = nxt
    return sum(vec)

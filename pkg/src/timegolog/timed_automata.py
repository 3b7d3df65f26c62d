"""Timed automata, parallel composition, and zone-based reachability.

Zones are difference bound matrices over the declared clocks plus the zero
reference; all bounds are integers (inputs must be pre-scaled), emptiness
and inclusion are decided on the canonical form.  The reachability search
returns a concrete run: a switch sequence with exact rational delays chosen
inside the feasible zone chain.

The matrices are int64 numpy arrays with bounds packed into integers: a
bound "difference <= v" is 2v+1, "difference < v" is 2v, and a large
sentinel stands for infinity.  Packing keeps the Floyd-Warshall closure a
handful of vectorized array operations.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Hashable, Iterable, Optional

import numpy as np

from .temporal import ClockConstraint, TRUE_CONSTRAINT, eval_constraint

EPSILON = "ε"

INF = 1 << 40  # packed infinity; finite packed bounds stay tiny
LE_ZERO = 1  # packed (<= 0)


def _le(v: int) -> int:
    return 2 * v + 1


def _lt(v: int) -> int:
    return 2 * v


def _add(m1, m2):
    """Packed bound addition: values add, the result is non-strict only when
    both arguments are."""
    out = m1 + m2 - ((m1 | m2) & 1)
    return np.where((m1 >= INF) | (m2 >= INF), INF, out)


class Zone:
    """Canonical DBM over clocks x_1..x_n with x_0 the zero reference."""

    __slots__ = ("clocks", "m", "_index")

    def __init__(self, clocks: tuple, m=None):
        self.clocks = tuple(clocks)
        self._index = {c: i + 1 for i, c in enumerate(self.clocks)}
        n = len(self.clocks) + 1
        if m is None:
            m = np.full((n, n), INF, dtype=np.int64)
            m[0, :] = LE_ZERO  # clocks are non-negative
            np.fill_diagonal(m, LE_ZERO)
        self.m = m

    @classmethod
    def zero(cls, clocks: tuple) -> "Zone":
        z = cls(clocks)
        z.m = np.full_like(z.m, LE_ZERO)
        return z

    @classmethod
    def universal(cls, clocks: tuple) -> "Zone":
        return cls(clocks)

    def copy(self) -> "Zone":
        z = Zone.__new__(Zone)
        z.clocks = self.clocks
        z._index = self._index
        z.m = self.m.copy()
        return z

    def canonicalized(self) -> "Zone":
        """Tighten all bounds (Floyd-Warshall closure); idempotent."""
        z = self.copy()
        m = z.m
        for k in range(len(m)):
            via = _add(m[:, k, None], m[None, k, :])
            np.minimum(m, via, out=m)
        return z

    def is_empty(self) -> bool:
        return bool(self.m.diagonal().min() < LE_ZERO)

    def _tighten(self, i: int, j: int, packed: int):
        if packed < self.m[i, j]:
            self.m[i, j] = packed

    def _apply_atom(self, clock: str, rel: str, const: int):
        i = self._index[clock]
        if rel in ("<", "<="):
            self._tighten(i, 0, _lt(const) if rel == "<" else _le(const))
        elif rel in (">", ">="):
            self._tighten(0, i, _lt(-const) if rel == ">" else _le(-const))
        elif rel == "=":
            self._tighten(i, 0, _le(const))
            self._tighten(0, i, _le(-const))
        else:
            raise ValueError(f"unknown relation {rel!r}")

    def and_atom(self, clock: str, rel: str, const: int) -> "Zone":
        z = self.copy()
        z._apply_atom(clock, rel, const)
        return z.canonicalized()

    def and_constraint(self, g: ClockConstraint) -> "Zone":
        if not g.atoms:
            return self
        z = self.copy()
        for clock, rel, const in g.atoms:
            z._apply_atom(clock, rel, const)
        return z.canonicalized()

    def intersect(self, other: "Zone") -> "Zone":
        assert self.clocks == other.clocks
        z = self.copy()
        np.minimum(z.m, other.m, out=z.m)
        return z.canonicalized()

    def up(self) -> "Zone":
        """Future closure: delay by any non-negative amount (stays canonical)."""
        z = self.copy()
        z.m[1:, 0] = INF
        return z

    def down(self) -> "Zone":
        """Past closure intersected with non-negative clocks."""
        z = self.copy()
        n = len(z.m)
        for j in range(1, n):
            z.m[0, j] = min(LE_ZERO, int(z.m[1:, j].min()))
        return z.canonicalized()

    def reset(self, names: Iterable[str]) -> "Zone":
        """Zero the given clocks (input must be canonical; stays canonical)."""
        z = self.copy()
        for name in names:
            y = z._index[name]
            z.m[y, :] = z.m[0, :]
            z.m[:, y] = z.m[:, 0]
            z.m[y, y] = LE_ZERO
            z.m[y, 0] = LE_ZERO
            z.m[0, y] = LE_ZERO
        return z

    def free(self, names: Iterable[str]) -> "Zone":
        """Remove all constraints on the given clocks except non-negativity."""
        z = self.copy()
        for name in names:
            y = z._index[name]
            z.m[y, :] = INF
            z.m[:, y] = z.m[:, 0]
            z.m[0, y] = LE_ZERO
            z.m[y, y] = LE_ZERO
        return z.canonicalized()

    def reset_pre(self, names: Iterable[str]) -> "Zone":
        """Weakest pre-zone of a reset: valuations landing here after zeroing."""
        names = tuple(names)
        z = self.copy()
        for name in names:
            z._apply_atom(name, "=", 0)
        z = z.canonicalized()
        if z.is_empty():
            return z
        return z.free(names)

    def extrapolate(self, k: int) -> "Zone":
        """Classical maximal-bound abstraction: bounds above k are dropped,
        bounds below -k are clamped; keeps the zone graph finite."""
        z = self.copy()
        m = z.m
        diag = np.eye(len(m), dtype=bool)
        high = (m > _le(k)) & ~diag & (m < INF)
        low = (m < _lt(-k)) & ~diag
        if not high.any() and not low.any():
            return self
        m[high] = INF
        m[low] = _lt(-k)
        return z.canonicalized()

    def includes(self, other: "Zone") -> bool:
        """other ⊆ self, both canonical."""
        return bool((other.m <= self.m).all())

    def _bounds(self):
        n = len(self.m)
        for i in range(n):
            for j in range(n):
                if i == j:
                    continue
                packed = int(self.m[i, j])
                if packed >= INF:
                    continue
                yield i, j, packed >> 1, not (packed & 1)

    def contains_point(self, valuation: dict) -> bool:
        vals = [Fraction(0)] + [valuation[c] for c in self.clocks]
        for i, j, v, strict in self._bounds():
            diff = vals[i] - vals[j]
            if (diff >= v) if strict else (diff > v):
                return False
        return True

    def delay_interval(self, valuation: dict):
        """Feasible delays d with valuation+d inside the zone, as
        (lo, lo_strict, hi, hi_strict) with hi possibly None; None if empty."""
        lo, lo_strict = Fraction(0), False
        hi, hi_strict = None, False
        vals = [Fraction(0)] + [valuation[c] for c in self.clocks]
        for i, j, v, strict in self._bounds():
            if i == 0 and j > 0:
                # -x_j - d <= v  =>  d >= -v - x_j
                cand = -v - vals[j]
                if cand > lo or (cand == lo and strict):
                    lo, lo_strict = cand, strict
            elif j == 0 and i > 0:
                # x_i + d <= v  =>  d <= v - x_i
                cand = v - vals[i]
                if hi is None or cand < hi or (cand == hi and strict):
                    hi, hi_strict = cand, strict
            else:
                diff = vals[i] - vals[j]
                if (diff >= v) if strict else (diff > v):
                    return None
        if lo < 0:
            lo, lo_strict = Fraction(0), False
        if hi is not None and (hi < lo or (hi == lo and (lo_strict or hi_strict))):
            return None
        return (lo, lo_strict, hi, hi_strict)

    def key(self):
        return self.m.tobytes()


def pick_delay(interval) -> Fraction:
    """Deterministic delay inside a feasible interval: the infimum when it is
    attained, otherwise a canonical interior point."""
    lo, lo_strict, hi, hi_strict = interval
    if not lo_strict:
        return lo
    if hi is None:
        return lo + 1
    return lo + (hi - lo) / 2


# --- the automaton ---------------------------------------------------------------


@dataclass(frozen=True)
class Switch:
    src: Hashable
    label: str
    guard: ClockConstraint
    resets: frozenset
    dst: Hashable

    def __str__(self):
        resets = ",".join(sorted(self.resets))
        return f"{self.src} --{self.label} [{self.guard}] {{{resets}}}--> {self.dst}"


@dataclass(frozen=True)
class TimedAutomaton:
    locations: tuple
    initial: Hashable
    finals: frozenset
    clocks: tuple
    invariants: dict  # location -> ClockConstraint (missing = true)
    switches: tuple

    def __post_init__(self):
        if self.initial not in self.locations:
            raise ValueError("initial location not declared")
        declared = set(self.clocks)
        for sw in self.switches:
            used = sw.guard.clocks() | sw.resets
            if not used <= declared:
                raise ValueError(f"switch {sw} uses undeclared clocks")
        for loc, inv in self.invariants.items():
            if not inv.clocks() <= declared:
                raise ValueError(f"invariant of {loc!r} uses undeclared clocks")

    def labels(self) -> frozenset:
        return frozenset(sw.label for sw in self.switches)

    def invariant(self, loc) -> ClockConstraint:
        return self.invariants.get(loc, TRUE_CONSTRAINT)

    def max_constant(self) -> int:
        k = 0
        for sw in self.switches:
            k = max(k, sw.guard.max_constant())
        for inv in self.invariants.values():
            k = max(k, inv.max_constant())
        return k

    def with_epsilon_loops(self) -> "TimedAutomaton":
        """Self-looping ε switch on every location (idempotent)."""
        have = {sw.src for sw in self.switches if sw.label == EPSILON and sw.src == sw.dst}
        extra = tuple(
            Switch(l, EPSILON, TRUE_CONSTRAINT, frozenset(), l)
            for l in self.locations
            if l not in have
        )
        return TimedAutomaton(
            self.locations, self.initial, self.finals, self.clocks,
            self.invariants, self.switches + extra,
        )


def make_ta(locations, initial, finals, clocks, invariants=None, switches=()) -> TimedAutomaton:
    return TimedAutomaton(
        tuple(locations), initial, frozenset(finals), tuple(clocks),
        dict(invariants or {}), tuple(switches),
    )


def parallel_compose(a1: TimedAutomaton, a2: TimedAutomaton) -> TimedAutomaton:
    """Asynchronous product: every switch of either side fires on its own,
    the other side staying put; ε self-loops are preserved per location pair."""
    shared_clocks = set(a1.clocks) & set(a2.clocks)
    if shared_clocks:
        raise ValueError(f"clock names collide: {sorted(shared_clocks)}")
    shared = (a1.labels() & a2.labels()) - {EPSILON}
    if shared:
        raise ValueError(f"labels collide: {sorted(shared)}")
    locations = tuple((l1, l2) for l1 in a1.locations for l2 in a2.locations)
    invariants = {}
    for l1, l2 in locations:
        inv = a1.invariant(l1).conjoin(a2.invariant(l2))
        if inv.atoms:
            invariants[(l1, l2)] = inv
    switches = []
    for sw in a1.switches:
        for l2 in a2.locations:
            switches.append(Switch((sw.src, l2), sw.label, sw.guard, sw.resets, (sw.dst, l2)))
    for sw in a2.switches:
        for l1 in a1.locations:
            switches.append(Switch((l1, sw.src), sw.label, sw.guard, sw.resets, (l1, sw.dst)))
    return TimedAutomaton(
        locations,
        (a1.initial, a2.initial),
        frozenset((f1, f2) for f1 in a1.finals for f2 in a2.finals),
        a1.clocks + a2.clocks,
        invariants,
        tuple(switches),
    )


# --- reachability ----------------------------------------------------------------


@dataclass(frozen=True)
class Run:
    """Accepting run: per step the switch taken and the exact delay before it."""

    steps: tuple  # of (Switch, Fraction)

    def replay_valuations(self, ta: TimedAutomaton):
        """Concrete valuations along the run; raises if a guard or invariant
        fails, which would mean the witness is unsound."""
        valuation = {c: Fraction(0) for c in ta.clocks}
        loc = ta.initial
        if not eval_constraint(valuation, ta.invariant(loc)):
            raise AssertionError("initial valuation violates the invariant")
        trail = [(loc, dict(valuation))]
        for sw, delay in self.steps:
            if sw.src != loc:
                raise AssertionError("run is not connected")
            valuation = {c: v + delay for c, v in valuation.items()}
            if not eval_constraint(valuation, ta.invariant(loc)):
                raise AssertionError("delay violates the source invariant")
            if not eval_constraint(valuation, sw.guard):
                raise AssertionError("guard fails on replay")
            valuation = {c: (Fraction(0) if c in sw.resets else v) for c, v in valuation.items()}
            loc = sw.dst
            if not eval_constraint(valuation, ta.invariant(loc)):
                raise AssertionError("target invariant fails on replay")
            trail.append((loc, dict(valuation)))
        return trail


def run_to_timed_word(run: Run) -> tuple:
    """Absolute-time word (label, time), ε steps dropped."""
    out = []
    now = Fraction(0)
    for sw, delay in run.steps:
        now += delay
        if sw.label != EPSILON:
            out.append((sw.label, now))
    return tuple(out)


def zone_reach(ta: TimedAutomaton, budget: int = 200000) -> Optional[Run]:
    """Breadth-first zone exploration; returns one accepting run with
    concrete delays, or None when no final location is reachable."""
    from collections import deque

    k = ta.max_constant()
    switches_from = {}
    for idx, sw in enumerate(ta.switches):
        switches_from.setdefault(sw.src, []).append((idx, sw))

    init = Zone.zero(ta.clocks).and_constraint(ta.invariant(ta.initial))
    if init.is_empty():
        return None
    # node: (loc, zone); parents: node id -> (parent id, switch index)
    nodes = [(ta.initial, init)]
    parents = {0: None}
    stored = {ta.initial: [(0, init)]}
    queue = deque([0])
    goal = 0 if ta.initial in ta.finals else None

    while queue and goal is None:
        nid = queue.popleft()
        loc, zone = nodes[nid]
        for idx, sw in sorted(switches_from.get(loc, []), key=lambda p: p[0]):
            z = zone.up().and_constraint(ta.invariant(loc)).and_constraint(sw.guard)
            if z.is_empty():
                continue
            z = z.reset(sw.resets).and_constraint(ta.invariant(sw.dst))
            if z.is_empty():
                continue
            z = z.extrapolate(k)
            bucket = stored.setdefault(sw.dst, [])
            if any(existing.includes(z) for _, existing in bucket):
                continue
            nodes.append((sw.dst, z))
            new_id = len(nodes) - 1
            if len(nodes) > budget:
                raise ResourceWarning(f"zone graph exceeded {budget} nodes")
            parents[new_id] = (nid, idx)
            bucket.append((new_id, z))
            queue.append(new_id)
            if sw.dst in ta.finals:
                goal = new_id
                break

    if goal is None:
        return None

    path = []
    cur = goal
    while parents[cur] is not None:
        pid, idx = parents[cur]
        path.append(ta.switches[idx])
        cur = pid
    path.reverse()
    return _extract_run(ta, path)


def _extract_run(ta: TimedAutomaton, path: list) -> Run:
    """Concrete delays for a fixed switch path via backward zone propagation,
    then greedy forward choice of the earliest feasible delay.

    post[i] is the feasible set for the valuation at the moment switch i
    fires (after the delay, before the reset), taking the whole remaining
    suffix into account.
    """
    n = len(path)
    post = [None] * n
    for i in range(n - 1, -1, -1):
        sw = path[i]
        if i == n - 1:
            after_reset = Zone.universal(ta.clocks).and_constraint(ta.invariant(sw.dst))
        else:
            after_reset = post[i + 1].down().and_constraint(ta.invariant(sw.dst))
        post[i] = (
            after_reset.reset_pre(sw.resets)
            .and_constraint(sw.guard)
            .and_constraint(ta.invariant(sw.src))
        )
        if post[i].is_empty():
            raise AssertionError("infeasible path from zone search")

    valuation = {c: Fraction(0) for c in ta.clocks}
    delays = []
    for i, sw in enumerate(path):
        interval = post[i].delay_interval(valuation)
        if interval is None:
            raise AssertionError("no feasible delay on replay")
        d = pick_delay(interval)
        delays.append(d)
        valuation = {c: v + d for c, v in valuation.items()}
        valuation = {c: (Fraction(0) if c in sw.resets else v) for c, v in valuation.items()}
    return Run(tuple(zip(path, delays)))


# --- serialization ----------------------------------------------------------------


def loc_str(loc) -> str:
    if isinstance(loc, tuple):
        return "|".join(loc_str(l) for l in loc)
    return str(loc)


def constraint_to_sexpr(g: ClockConstraint) -> str:
    if not g.atoms:
        return "true"
    parts = [f"({rel} {clock} {const})" for clock, rel, const in g.atoms]
    return parts[0] if len(parts) == 1 else "(and " + " ".join(parts) + ")"


def ta_to_json(ta: TimedAutomaton) -> dict:
    return {
        "locations": [loc_str(l) for l in ta.locations],
        "initial": loc_str(ta.initial),
        "finals": sorted(loc_str(l) for l in ta.finals),
        "clocks": list(ta.clocks),
        "invariants": {
            loc_str(l): constraint_to_sexpr(inv) for l, inv in sorted(
                ta.invariants.items(), key=lambda kv: loc_str(kv[0])
            )
        },
        "switches": [
            {
                "src": loc_str(sw.src),
                "label": sw.label,
                "guard": constraint_to_sexpr(sw.guard),
                "resets": sorted(sw.resets),
                "dst": loc_str(sw.dst),
            }
            for sw in ta.switches
        ],
    }


def ta_to_dot(ta: TimedAutomaton) -> str:
    lines = ["digraph ta {", "  rankdir=LR;"]
    for loc in ta.locations:
        name = loc_str(loc)
        shape = "doublecircle" if loc in ta.finals else "circle"
        inv = ta.invariants.get(loc)
        label = name if inv is None else f"{name}\\n{inv}"
        lines.append(f'  "{name}" [shape={shape}, label="{label}"];')
    lines.append(f'  "__init" [shape=point];')
    lines.append(f'  "__init" -> "{loc_str(ta.initial)}";')
    for sw in ta.switches:
        parts = [sw.label]
        if sw.guard.atoms:
            parts.append(str(sw.guard))
        if sw.resets:
            parts.append(", ".join(f"{c}:=0" for c in sorted(sw.resets)))
        label = " / ".join(parts)
        lines.append(f'  "{loc_str(sw.src)}" -> "{loc_str(sw.dst)}" [label="{label}"];')
    lines.append("}")
    return "\n".join(lines)

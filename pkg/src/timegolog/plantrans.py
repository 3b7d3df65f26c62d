"""Plan transformation: encode a fixed action sequence and its timing
constraints as a timed automaton, compose it with the platform model,
rewrite the product so chaining constraints are enforced structurally, and
extract a satisfying timed trace by zone reachability.

The constraint language has three forms: absolute timing for the i-th plan
action, relative timing between two plan actions, and chains requiring the
platform to pass through location stages within given windows between two
matched plan actions.
"""

from __future__ import annotations

from dataclasses import dataclass
from fnmatch import fnmatchcase
from fractions import Fraction
from typing import Optional

from . import mtl
from .mtl import Atom, Interval, MtlFormula, TimedWord
from .temporal import ClockConstraint, eval_constraint
from .timed_automata import (
    EPSILON,
    Switch,
    TimedAutomaton,
    make_ta,
    parallel_compose,
    run_to_timed_word,
    zone_reach,
)


class PlanConstraintError(ValueError):
    """A constraint cannot be satisfied structurally (e.g. a chain stage
    matches no platform location within its activation)."""


@dataclass(frozen=True)
class Plan:
    actions: tuple  # ground action names, 1-based in constraints

    def __post_init__(self):
        if not all(isinstance(a, str) and a for a in self.actions):
            raise ValueError("plan actions must be non-empty names")

    def __len__(self):
        return len(self.actions)

    def action(self, i: int) -> str:
        return self.actions[i - 1]


@dataclass(frozen=True)
class Abs:
    i: int
    interval: Interval


@dataclass(frozen=True)
class Rel:
    i: int
    j: int
    interval: Interval

    def __post_init__(self):
        if not self.i < self.j:
            raise ValueError("relative constraints need i < j")


@dataclass(frozen=True)
class Chain:
    """Between matched plan actions the platform must pass through the
    stages in order; `stages` pairs a location predicate (an MTL boolean
    formula over platform location names) with a duration interval."""

    stages: tuple  # of (MtlFormula over locations, Interval)
    alpha1: str  # action matcher
    alpha2: str

    def __post_init__(self):
        if not self.stages:
            raise ValueError("chains need at least one stage")


@dataclass(frozen=True)
class ConstraintSet:
    abs: tuple = ()
    rel: tuple = ()
    chain: tuple = ()

    def check_indices(self, plan: Plan):
        for c in self.abs:
            if not 1 <= c.i <= len(plan):
                raise ValueError(f"absolute constraint index {c.i} outside the plan")
        for c in self.rel:
            if not 1 <= c.i < c.j <= len(plan):
                raise ValueError(f"relative constraint ({c.i},{c.j}) outside the plan")


def match_action(pattern: str, action: str) -> bool:
    """Matchers are exact names, globs, or kind-prefixed globs on the base
    of start(...)/end(...) actions, e.g. "start:goto*"."""
    for kind in ("start", "end"):
        prefix = kind + ":"
        if pattern.startswith(prefix):
            if not (action.startswith(kind + "(") and action.endswith(")")):
                return False
            base = action[len(kind) + 1:-1]
            return fnmatchcase(base, pattern[len(prefix):])
    return fnmatchcase(action, pattern)


@dataclass(frozen=True)
class Activation:
    s: int
    e: int


def get_activations(chain: Chain, plan: Plan) -> frozenset:
    """Pairs (s, e) with the s-th action matching alpha1, the e-th matching
    alpha2, and no alpha1 or alpha2 match strictly between (the scope runs
    to the first closing match)."""
    out = set()
    n = len(plan)
    for s in range(1, n + 1):
        if not match_action(chain.alpha1, plan.action(s)):
            continue
        for e in range(s + 1, n + 1):
            if match_action(chain.alpha1, plan.action(e)):
                break
            if match_action(chain.alpha2, plan.action(e)):
                out.add(Activation(s, e))
                break
    return frozenset(out)


def _interval_atoms(clock: str, interval: Interval) -> tuple:
    atoms = []
    if interval.lo > 0 or interval.lo_open:
        atoms.append((clock, ">" if interval.lo_open else ">=", interval.lo))
    if interval.hi is not None:
        atoms.append((clock, "<" if interval.hi_open else "<=", interval.hi))
    return tuple(atoms)


def rel_clock(i: int, j: int) -> str:
    return f"x_{i}_{j}"


def encode_plan(plan: Plan, constraints: ConstraintSet) -> TimedAutomaton:
    """One location per plan position; switch i fires action i, guarded by
    the absolute window and the relative windows ending at i, and resets the
    relative clocks starting at i.  Only clocks some constraint mentions are
    declared; the accepted words are exactly the correctly ordered, fully
    timed plans meeting every absolute and relative constraint."""
    constraints.check_indices(plan)
    n = len(plan)
    abs_by_i: dict = {}
    for c in constraints.abs:
        abs_by_i.setdefault(c.i, []).append(c.interval)
    rel_pairs = {(c.i, c.j) for c in constraints.rel}
    clocks = []
    if abs_by_i:
        clocks.append("x_abs")
    clocks += [rel_clock(i, j) for i, j in sorted(rel_pairs)]
    switches = []
    for i in range(1, n + 1):
        atoms = []
        for interval in abs_by_i.get(i, ()):
            atoms += _interval_atoms("x_abs", interval)
        for c in constraints.rel:
            if c.j == i:
                atoms += _interval_atoms(rel_clock(c.i, c.j), c.interval)
        resets = frozenset(rel_clock(i, j) for (k, j) in rel_pairs if k == i)
        switches.append(
            Switch(f"l{i - 1}", plan.action(i), ClockConstraint(tuple(atoms)), resets, f"l{i}")
        )
    return make_ta(
        locations=[f"l{i}" for i in range(n + 1)],
        initial="l0",
        finals=[f"l{n}"],
        clocks=clocks,
        invariants={},
        switches=switches,
    )


# --- chain surgery on the product -------------------------------------------------


def plan_index(loc) -> int:
    """Plan position of a (possibly surgery-tagged) product location."""
    if isinstance(loc, str):
        if loc.startswith("l") and loc[1:].isdigit():
            return int(loc[1:])
        raise ValueError(f"not a plan location: {loc!r}")
    if isinstance(loc, tuple):
        for part in loc:
            try:
                return plan_index(part)
            except ValueError:
                continue
    raise ValueError(f"no plan component in {loc!r}")


def platform_location(loc, platform_names: frozenset) -> str:
    if isinstance(loc, str):
        if loc in platform_names:
            return loc
        raise ValueError(f"not a platform location: {loc!r}")
    if isinstance(loc, tuple):
        for part in loc:
            try:
                return platform_location(part, platform_names)
            except ValueError:
                continue
    raise ValueError(f"no platform component in {loc!r}")


def _beta_holds(beta: MtlFormula, location: str) -> bool:
    word = TimedWord(((frozenset({location}), Fraction(0)),))
    return mtl.satisfies(word, 0, beta)


def enforce_chain(
    a: TimedAutomaton,
    activation: Activation,
    chain: Chain,
    clock: str,
    platform_names: frozenset,
) -> TimedAutomaton:
    """Replace the activation context by one filtered copy per stage.

    Stage j keeps the context locations whose platform component satisfies
    the stage predicate; switches between consecutive stages carry the
    stage-duration guard and reset the chain clock, entry switches reset it,
    and exit switches carry the final stage's guard.  The platform's ε
    self-loops let consecutive stages share a location without an actual
    platform action.
    """
    s, e = activation.s, activation.e
    context = {loc for loc in a.locations if s <= plan_index(loc) < e}
    if not context:
        raise PlanConstraintError(f"activation ({s},{e}) has an empty context")
    stages = []
    for j, (beta, _) in enumerate(chain.stages, start=1):
        kept = {
            loc for loc in context
            if _beta_holds(beta, platform_location(loc, platform_names))
        }
        if not kept:
            raise PlanConstraintError(
                f"chain stage {j} matches no platform location within "
                f"activation ({s},{e}): constraint unsatisfiable"
            )
        stages.append(kept)
    n_stages = len(stages)
    intervals = [iv for _, iv in chain.stages]

    def tagged(loc, j):
        return (loc, ("stage", clock, j))

    locations = [loc for loc in a.locations if loc not in context]
    invariants = {l: g for l, g in a.invariants.items() if l not in context}
    for j, kept in enumerate(stages, start=1):
        for loc in kept:
            locations.append(tagged(loc, j))
            if loc in a.invariants:
                invariants[tagged(loc, j)] = a.invariants[loc]

    switches = []
    for sw in a.switches:
        src_in, dst_in = sw.src in context, sw.dst in context
        if not src_in and not dst_in:
            switches.append(sw)
            continue
        if not src_in and dst_in:
            # context entry: start stage 1 and the chain clock
            if sw.dst in stages[0]:
                switches.append(Switch(
                    sw.src, sw.label, sw.guard,
                    sw.resets | {clock}, tagged(sw.dst, 1),
                ))
            continue
        if src_in and not dst_in:
            # context exit: only from the last stage, closing its window
            if sw.src in stages[n_stages - 1]:
                guard = sw.guard.conjoin(
                    ClockConstraint(_interval_atoms(clock, intervals[-1]))
                )
                switches.append(Switch(
                    tagged(sw.src, n_stages), sw.label, guard, sw.resets, sw.dst,
                ))
            continue
        # internal: within a stage, and across consecutive stages
        for j in range(1, n_stages + 1):
            if sw.src in stages[j - 1] and sw.dst in stages[j - 1]:
                switches.append(Switch(
                    tagged(sw.src, j), sw.label, sw.guard, sw.resets, tagged(sw.dst, j),
                ))
            if j < n_stages and sw.src in stages[j - 1] and sw.dst in stages[j]:
                guard = sw.guard.conjoin(
                    ClockConstraint(_interval_atoms(clock, intervals[j - 1]))
                )
                switches.append(Switch(
                    tagged(sw.src, j), sw.label, guard,
                    sw.resets | {clock}, tagged(sw.dst, j + 1),
                ))

    clocks = a.clocks if clock in a.clocks else a.clocks + (clock,)
    finals = frozenset(l for l in a.finals if l not in context)
    return make_ta(locations, a.initial, finals, clocks, invariants, switches)


def transform_plan(
    plan: Plan, platform: TimedAutomaton, constraints: ConstraintSet
) -> Optional[tuple]:
    """Timed realization of the plan interleaved with platform actions, or
    None when the constraints are unsatisfiable.  The platform automaton is
    ε-augmented automatically; ε never shows up in the result."""
    shared = set(plan.actions) & {str(sw.label) for sw in platform.switches}
    if shared:
        raise ValueError(f"plan actions collide with platform labels: {sorted(shared)}")
    enc = build_encoding(plan, platform, constraints)
    run = zone_reach(enc)
    if run is None:
        return None
    return run_to_timed_word(run)


def build_encoding(
    plan: Plan, platform: TimedAutomaton, constraints: ConstraintSet
) -> TimedAutomaton:
    """The fully constrained product automaton (exposed for inspection)."""
    platform = platform.with_epsilon_loops()
    product = parallel_compose(encode_plan(plan, constraints), platform)
    platform_names = frozenset(str(l) for l in platform.locations)
    for ci, chain in enumerate(constraints.chain):
        clock = f"x_chain{ci}"
        for act in sorted(get_activations(chain, plan), key=lambda a: (a.s, a.e)):
            product = enforce_chain(product, act, chain, clock, platform_names)
    return product


# --- independent validation ---------------------------------------------------------


def constraint_formulas(plan: Plan, constraints: ConstraintSet) -> list[MtlFormula]:
    """The constraints spelled out as trace formulas over plan-position
    atoms PlanOrder(i), action-occurrence atoms, and platform locations."""
    out = []
    for c in constraints.abs:
        out.append(mtl.finally_(Atom(f"PlanOrder({c.i})"), c.interval))
    for c in constraints.rel:
        out.append(mtl.finally_(mtl.And((
            Atom(f"PlanOrder({c.i})"),
            mtl.finally_(Atom(f"PlanOrder({c.j})"), c.interval),
        ))))
    for chain in constraints.chain:
        out.append(chain_formula(plan, chain))
    return out


def _matcher_formula(plan: Plan, pattern: str) -> MtlFormula:
    names = sorted({a for a in plan.actions if match_action(pattern, a)})
    return mtl.Or(tuple(Atom(a) for a in names))


def chain_formula(plan: Plan, chain: Chain) -> MtlFormula:
    a1 = _matcher_formula(plan, chain.alpha1)
    a2 = _matcher_formula(plan, chain.alpha2)
    trigger = mtl.And((a1, mtl.Until(mtl.Not(a1), a2)))

    def level(j: int) -> MtlFormula:
        beta, interval = chain.stages[j]
        hold = mtl.And((beta, mtl.Not(a2)))
        target = a2 if j == len(chain.stages) - 1 else level(j + 1)
        return mtl.And((hold, mtl.Until(hold, target, interval)))

    return mtl.globally(mtl.Or((mtl.Not(trigger), level(0))))


def trace_word(plan: Plan, platform: TimedAutomaton, trace: tuple) -> Optional[TimedWord]:
    """State-based word of a transformed trace: occurrence atoms, the last
    plan position, and the platform location; None when the trace does not
    replay on the plan order and the platform semantics."""
    plan_actions = list(plan.actions)
    platform_by_label: dict = {}
    for sw in platform.switches:
        platform_by_label.setdefault(str(sw.label), []).append(sw)

    # depth-first replay over the (finitely many) nondeterministic platform runs
    def replay(k, loc, valuation, now, plan_pos, entries):
        if k == len(trace):
            if plan_pos != len(plan_actions):
                return None
            if platform.finals and loc not in platform.finals:
                return None
            return entries
        action, t = trace[k]
        t = Fraction(t)
        if t < now:
            return None
        advanced = {c: v + (t - now) for c, v in valuation.items()}
        if not eval_constraint(advanced, platform.invariant(loc)):
            return None
        if action == EPSILON:
            return None
        is_plan = plan_pos < len(plan_actions) and action == plan_actions[plan_pos]
        if is_plan:
            symbols = {action, f"PlanOrder({plan_pos + 1})", str(loc)}
            return replay(
                k + 1, loc, advanced, t, plan_pos + 1,
                entries + [(frozenset(symbols), t)],
            )
        for sw in platform_by_label.get(action, ()):
            if sw.src != loc:
                continue
            if not eval_constraint(advanced, sw.guard):
                continue
            succ = {c: (Fraction(0) if c in sw.resets else v) for c, v in advanced.items()}
            if not eval_constraint(succ, platform.invariant(sw.dst)):
                continue
            po = {f"PlanOrder({plan_pos})"} if plan_pos else set()
            symbols = {action, str(sw.dst)} | po
            got = replay(k + 1, sw.dst, succ, t, plan_pos, entries + [(frozenset(symbols), t)])
            if got is not None:
                return got
        return None

    start_val = {c: Fraction(0) for c in platform.clocks}
    if not eval_constraint(start_val, platform.invariant(platform.initial)):
        return None
    first = (frozenset({str(platform.initial)}), Fraction(0))
    entries = replay(0, platform.initial, start_val, Fraction(0), 0, [first])
    if entries is None:
        return None
    return TimedWord(tuple(entries))


# --- silent-move reconstruction ----------------------------------------------------
#
# Emitted traces drop the platform's ε self-loops, but the constraint
# semantics observes a trace position at every action, including an ε move
# that advances a chain stage without changing the platform location.  The
# validator therefore searches for stage-crossing times consistent with the
# observed positions (a chain of interval constraints) and re-inserts those
# observation points before handing the word to the semantics oracle.


@dataclass(frozen=True)
class _Window:
    """Interval of feasible times; hi=None is unbounded, endpoints may be open."""

    lo: Fraction
    lo_open: bool = False
    hi: Optional[Fraction] = None
    hi_open: bool = False

    @staticmethod
    def point(t) -> "_Window":
        return _Window(t, False, t, False)

    def shift(self, iv: Interval) -> "_Window":
        """Times t with t - s inside iv for some feasible s."""
        if self.hi is None or iv.hi is None:
            hi, hi_open = None, False
        else:
            hi, hi_open = self.hi + iv.hi, self.hi_open or iv.hi_open
        return _Window(self.lo + iv.lo, self.lo_open or iv.lo_open, hi, hi_open)

    def back_shift(self, iv: Interval) -> "_Window":
        """Times s with t - s inside iv for some feasible t."""
        if self.lo is None or iv.hi is None:
            lo, lo_open = Fraction(0), False
        else:
            lo = self.lo - iv.hi
            lo_open = self.lo_open or iv.hi_open
            if lo < 0:
                lo, lo_open = Fraction(0), False
        if self.hi is None:
            return _Window(lo, lo_open, None, False)
        return _Window(lo, lo_open, self.hi - iv.lo, self.hi_open or iv.lo_open)

    def clamp(self, lo, hi) -> "_Window":
        """Intersection with the closed interval [lo, hi]."""
        nlo, nlo_open = self.lo, self.lo_open
        if lo > nlo:
            nlo, nlo_open = lo, False
        nhi, nhi_open = self.hi, self.hi_open
        if nhi is None or hi < nhi:
            nhi, nhi_open = hi, False
        return _Window(nlo, nlo_open, nhi, nhi_open)

    def intersect(self, other: "_Window") -> "_Window":
        lo, lo_open = max(
            (self.lo, self.lo_open), (other.lo, other.lo_open),
            key=lambda p: (p[0], p[1]),
        )
        if self.hi is None:
            hi, hi_open = other.hi, other.hi_open
        elif other.hi is None:
            hi, hi_open = self.hi, self.hi_open
        else:
            hi, hi_open = min(
                (self.hi, not self.hi_open), (other.hi, not other.hi_open),
                key=lambda p: (p[0], -p[1]),
            )
            hi_open = not hi_open
        return _Window(lo, lo_open, hi, hi_open)

    def empty(self) -> bool:
        if self.hi is None:
            return False
        if self.lo > self.hi:
            return True
        return self.lo == self.hi and (self.lo_open or self.hi_open)

    def earliest(self) -> Fraction:
        if not self.lo_open:
            return self.lo
        if self.hi is None:
            return self.lo + 1
        return self.lo + (self.hi - self.lo) / 2


def _chain_insertions(entries, plan, chain, platform_names):
    """Observation points restoring the chain's silent stage crossings, or
    None when no consistent crossing times exist for some activation.

    Crossings either coincide with an observed action (the platform move
    that switches the stage) or fall inside a piece whose location satisfies
    both adjacent stage predicates (an ε move).  Feasibility is a chain of
    interval constraints: windows are propagated forward through a search
    over piece assignments, and concrete times are fixed by a backward pass.
    """
    a1 = _matcher_formula(plan, chain.alpha1)
    a2 = _matcher_formula(plan, chain.alpha2)

    def matches(formula, symbols):
        return mtl.satisfies(TimedWord(((symbols, Fraction(0)),)), 0, formula)

    def loc_of(symbols):
        for s in symbols:
            if s in platform_names:
                return s
        raise ValueError("word entry lacks a platform location")

    n = len(chain.stages)
    intervals = [iv for _, iv in chain.stages]
    insertions = []
    for p in range(1, len(entries)):
        if not matches(a1, entries[p][0]):
            continue
        q = None
        for r in range(p + 1, len(entries)):
            if matches(a1, entries[r][0]):
                break
            if matches(a2, entries[r][0]):
                q = r
                break
        if q is None:
            continue
        times = [t for _, t in entries]
        locs = [loc_of(symbols) for symbols, _ in entries]
        beta_ok = [
            [_beta_holds(beta, locs[r]) for r in range(p, q)]
            for beta, _ in chain.stages
        ]

        def dfs(r, j, window):
            """Pieces before r are covered; stage j entered at a time in
            `window`.  Returns the crossing slots [(piece, kind)] or None.
            The next crossing may land in the same piece again (stages of
            zero duration), so recursion re-enters at piece m, not m+1.
            """
            if j == n - 1:
                for piece in range(r, q):
                    if not beta_ok[j][piece - p]:
                        return None
                if window.shift(intervals[j]).clamp(times[q], times[q]).empty():
                    return None
                return []
            for m in range(r, q):
                # seam: the observed action at position m switches the stage
                if m > p and m > r and beta_ok[j + 1][m - p]:
                    w = window.shift(intervals[j]).clamp(times[m], times[m])
                    if not w.empty():
                        rest = dfs(m, j + 1, w)
                        if rest is not None:
                            return [(m, "seam")] + rest
                # silent move inside piece m: the location fits both stages
                if beta_ok[j][m - p] and beta_ok[j + 1][m - p]:
                    w = window.shift(intervals[j]).clamp(times[m], times[m + 1])
                    if not w.empty():
                        rest = dfs(m, j + 1, w)
                        if rest is not None:
                            return [(m, "eps")] + rest
                if not beta_ok[j][m - p]:
                    return None  # cannot stay in stage j past this piece
            return None

        slots = dfs(p, 0, _Window.point(times[p]))
        if slots is None:
            return None

        # concrete times: backward-tighten the windows, then pick forward
        windows = []
        for (m, kind) in slots:
            windows.append(
                _Window.point(times[m]) if kind == "seam"
                else _Window(times[m], False, times[m + 1], False)
            )
        bound = _Window.point(times[q]).back_shift(intervals[n - 1])
        for j in range(len(slots) - 1, -1, -1):
            bound = windows[j].intersect(bound)
            windows[j] = bound
            bound = bound.back_shift(intervals[j])
        t_prev = times[p]
        for j, ((m, kind), w) in enumerate(zip(slots, windows)):
            t = _Window.point(t_prev).shift(intervals[j]).intersect(w).earliest()
            if kind == "eps":
                insertions.append((m, t, locs[m]))
            t_prev = t
    return insertions


def validate_transformed(
    trace: tuple, plan: Plan, platform: TimedAutomaton, constraints: ConstraintSet
) -> bool:
    """True iff the trace replays on the plan order and the platform
    semantics and every constraint holds under the independent trace-formula
    semantics (with the platform's silent stage-crossing moves restored as
    observation points)."""
    plan_sub = [a for a, _ in trace if a in set(plan.actions)]
    if plan_sub != list(plan.actions):
        return False
    word = trace_word(plan, platform, trace)
    if word is None:
        return False
    platform_names = frozenset(str(l) for l in platform.locations)
    entries = list(word.entries)
    all_insertions = []
    for chain in constraints.chain:
        got = _chain_insertions(entries, plan, chain, platform_names)
        if got is None:
            return False
        all_insertions.extend(got)
    augmented = list(entries)
    # insert from the back so earlier indices stay valid; within one piece,
    # later times go in first so the final order is ascending; duplicates
    # stay distinct (consecutive zero-duration stages each need their own
    # witness position)
    for piece, t, loc in sorted(all_insertions, key=lambda x: (-x[0], -x[1])):
        carry = {s for s in augmented[piece][0] if s.startswith("PlanOrder(")}
        augmented.insert(piece + 1, (frozenset({loc}) | frozenset(carry), t))
    final = TimedWord(tuple(augmented))
    return all(
        mtl.satisfies(final, 0, phi) for phi in constraint_formulas(plan, constraints)
    )


# --- JSON ------------------------------------------------------------------------


def constraints_from_json(obj: dict) -> ConstraintSet:
    abs_cs = tuple(
        Abs(int(c["i"]), Interval.from_json(c["interval"]))
        for c in obj.get("abs", ())
    )
    rel_cs = tuple(
        Rel(int(c["i"]), int(c["j"]), Interval.from_json(c["interval"]))
        for c in obj.get("rel", ())
    )
    chains = []
    for c in obj.get("chain", ()):
        stages = tuple(
            (mtl_from_beta(st["beta"]), Interval.from_json(st["interval"]))
            for st in c["stages"]
        )
        chains.append(Chain(stages, c["alpha1"], c["alpha2"]))
    return ConstraintSet(abs_cs, rel_cs, tuple(chains))


def mtl_from_beta(text: str) -> MtlFormula:
    from .parsing import parse_mtl

    return parse_mtl(text)


def constraints_to_json(cs: ConstraintSet) -> dict:
    from .parsing import parse_mtl  # noqa: F401  (symmetry with the loader)

    def beta_text(phi) -> str:
        if isinstance(phi, Atom):
            return phi.name
        if isinstance(phi, mtl.Not):
            return f"(not {beta_text(phi.arg)})"
        if isinstance(phi, mtl.And):
            return "true" if not phi.args else "(and " + " ".join(map(beta_text, phi.args)) + ")"
        if isinstance(phi, mtl.Or):
            return "false" if not phi.args else "(or " + " ".join(map(beta_text, phi.args)) + ")"
        raise ValueError(f"not a location predicate: {phi!r}")

    return {
        "abs": [{"i": c.i, "interval": c.interval.to_json()} for c in cs.abs],
        "rel": [{"i": c.i, "j": c.j, "interval": c.interval.to_json()} for c in cs.rel],
        "chain": [
            {
                "stages": [
                    {"beta": beta_text(beta), "interval": iv.to_json()}
                    for beta, iv in c.stages
                ],
                "alpha1": c.alpha1,
                "alpha2": c.alpha2,
            }
            for c in cs.chain
        ],
    }


def scale_constraints(cs: ConstraintSet, factor: int) -> ConstraintSet:
    if factor == 1:
        return cs

    def scale_iv(iv: Interval) -> Interval:
        return Interval(iv.lo * factor, None if iv.hi is None else iv.hi * factor,
                        iv.lo_open, iv.hi_open)

    return ConstraintSet(
        tuple(Abs(c.i, scale_iv(c.interval)) for c in cs.abs),
        tuple(Rel(c.i, c.j, scale_iv(c.interval)) for c in cs.rel),
        tuple(
            Chain(tuple((b, scale_iv(iv)) for b, iv in c.stages), c.alpha1, c.alpha2)
            for c in cs.chain
        ),
    )

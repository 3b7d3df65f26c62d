"""Verification and controller synthesis for timed programs.

The pipeline: compile the specification of undesired behavior into an
alternating timed automaton, run it in lockstep with the program
interpreter, restrict time steps to region increments over the pooled clock
set, determinize by collecting all simultaneous (program, automaton-config)
alternatives, and search the resulting finitely-branching system.  A
well-quasi-order on states closes paths that are dominated by an ancestor,
so the search graph is finite even for looping programs; a two-player
safety game on the graph decides whether a controller exists and yields one.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Optional

from .ata import Ata, ata_from_mtl, symbol_step, time_step
from . import golog, mtl
from .golog import Bat, Program, WorldState, normalize
from .mtl import MtlFormula, TimedWord
from .temporal import (
    ClockConstraint,
    canonical_value_map,
    canonical_word,
    mono_dom_leq,
    powerset_leq,
    time_successors,
)


class ResourceError(Exception):
    """Search exceeded its node budget."""


class NoControllerError(Exception):
    """Controller extraction attempted on a losing game."""


# --- problem assembly ---------------------------------------------------------


@dataclass
class Problem:
    """A synthesis/verification instance with caches shared by the search."""

    bat: Bat
    program: Program
    spec: MtlFormula  # positive normal form
    ata: Ata
    k: int

    def __post_init__(self):
        self._progress_cache = {}
        self._steps_cache = {}
        self._final_cache = {}
        self._symbol_cache = {}
        self._poss_cache = {}
        # when no test reads a clock, transitions and finality are functions
        # of the fluent state alone and the caches can ignore the valuation
        self._clocked_tests = golog.program_tests_mention_clocks(self.program)

    # fluent progression is time-invariant: cache per fluent state
    def progress_fluents(self, state: WorldState, action: str) -> WorldState:
        key = (state.fluent_key(), action)
        hit = self._progress_cache.get(key)
        if hit is None:
            hit = golog.progress(self.bat, state, action)
            self._progress_cache[key] = hit
        resets = self.bat.actions[action].resets
        clocks = {c: (Fraction(0) if c in resets else v) for c, v in state.clocks}
        return hit.with_clocks(clocks)

    def program_steps(self, state: WorldState, prog: Program) -> frozenset:
        clocks = state.clocks if self._clocked_tests else None
        key = (state.fluent_key(), clocks, prog)
        hit = self._steps_cache.get(key)
        if hit is None:
            hit = golog.program_steps(self.bat, state, prog)
            self._steps_cache[key] = hit
        return hit

    def is_final(self, state: WorldState, prog: Program) -> bool:
        clocks = state.clocks if self._clocked_tests else None
        key = (state.fluent_key(), clocks, prog)
        hit = self._final_cache.get(key)
        if hit is None:
            hit = golog.is_final(self.bat, state, prog)
            self._final_cache[key] = hit
        return hit

    def poss(self, state: WorldState, action: str) -> bool:
        key = (state.fluent_key(), action)
        hit = self._poss_cache.get(key)
        if hit is None:
            hit = golog.holds(self.bat, state, self.bat.actions[action].poss)
            self._poss_cache[key] = hit
        return hit

    def guard_ok(self, state: WorldState, action: str) -> bool:
        return golog.holds(self.bat, state, self.bat.actions[action].guard)

    def symbol(self, state: WorldState) -> frozenset:
        return frozenset(state.fluents) & self.ata.atom_universe

    def symbol_step(self, config: frozenset, symbol: frozenset) -> frozenset:
        key = (config, symbol)
        hit = self._symbol_cache.get(key)
        if hit is None:
            hit = symbol_step(config, symbol, self.ata)
            self._symbol_cache[key] = hit
        return hit


def _bat_clock_constants(bat: Bat):
    def walk(f):
        if isinstance(f, golog.SClock):
            yield f.const
        elif isinstance(f, (golog.SAnd, golog.SOr)):
            for a in f.args:
                yield from walk(a)
        elif isinstance(f, golog.SNot):
            yield from walk(f.arg)
        elif isinstance(f, golog.SQuant):
            yield from walk(f.body)

    for decl in bat.actions.values():
        yield from walk(decl.poss)
        yield from walk(decl.guard)


def build_problem(bat: Bat, program: Program, spec: MtlFormula) -> Problem:
    """Normalize the inputs and fix the maximal constant; clock constants
    must already be naturals (pre-scale rational instances and divide the
    reported times by the factor)."""
    consts = list(_bat_clock_constants(bat))
    if any(c.denominator != 1 for c in consts):
        raise golog.InputError("clock constants must be naturals; pre-scale the problem")
    pnf = mtl.to_pnf(spec)
    automaton = ata_from_mtl(pnf)
    k = max(1, mtl.max_constant(pnf), max((int(c) for c in consts), default=0))
    return Problem(bat, normalize(program), pnf, automaton, k)


# --- determinized product states -----------------------------------------------


@dataclass(frozen=True)
class Member:
    """One surviving (residual program, automaton configuration) alternative."""

    prog: Program
    config: frozenset  # of (ata location, Fraction)


@dataclass(frozen=True)
class DetState:
    """Determinized product state: the shared world (fluents, functional
    values, program clocks) and the set of member alternatives."""

    fluents: frozenset
    funcs: tuple
    clocks: tuple  # sorted (clock name, Fraction)
    members: frozenset  # of Member

    def world(self) -> WorldState:
        return WorldState(self.fluents, self.funcs, self.clocks)


def pooled_clock_set(state: DetState, ata: Ata) -> frozenset:
    """Program clocks plus every member's automaton clock values, the
    automaton entries tagged by their location names."""
    entries = set(state.clocks)
    for member in state.members:
        for loc, v in member.config:
            entries.add((ata.name_of(loc), v))
    return frozenset(entries)


def canonicalize(state: DetState, ata: Ata, k: int) -> DetState:
    """Joint region representative of all clock values; the node identity."""
    values = {v for _, v in state.clocks}
    for member in state.members:
        values |= {v for _, v in member.config}
    mapping = canonical_value_map(values, k)
    clocks = tuple((c, mapping[v]) for c, v in state.clocks)
    members = frozenset(
        Member(m.prog, frozenset((loc, mapping[v]) for loc, v in m.config))
        for m in state.members
    )
    return DetState(state.fluents, state.funcs, clocks, members)


def advance_state(state: DetState, d: Fraction) -> DetState:
    return DetState(
        state.fluents,
        state.funcs,
        tuple((c, v + d) for c, v in state.clocks),
        frozenset(Member(m.prog, time_step(m.config, d)) for m in state.members),
    )


def exact_initial_state(problem: Problem) -> DetState:
    w0 = problem.bat.initial
    configs = problem.symbol_step(
        problem.ata.initial_configuration(), problem.symbol(w0)
    )
    return DetState(
        w0.fluents, w0.funcs, w0.clocks,
        frozenset(Member(problem.program, g) for g in configs),
    )


def initial_det_state(problem: Problem) -> DetState:
    """Pair the fresh program with the automaton after it reads the set of
    initially true ground fluent atoms."""
    return canonicalize(exact_initial_state(problem), problem.ata, problem.k)


def is_bad(problem: Problem, state: DetState) -> bool:
    """Some member couples a final program configuration with an accepting
    automaton configuration: the trace so far satisfies the undesired spec."""
    world = state.world()
    return any(
        problem.ata.is_accepting(m.config) and problem.is_final(world, m.prog)
        for m in state.members
    )


def is_final_state(problem: Problem, state: DetState) -> bool:
    """Every member may stop here (used for the empty controller choice)."""
    world = state.world()
    return all(problem.is_final(world, m.prog) for m in state.members)


def increments(problem: Problem, state: DetState) -> list[Fraction]:
    """Accumulated region increments of the pooled clock set, ascending."""
    pooled = pooled_clock_set(state, problem.ata)
    return [acc for acc, _ in time_successors(pooled, problem.k)]


def det_successors_exact(problem: Problem, state: DetState) -> list:
    """All ((action, increment index), successor) pairs with exact values.

    Per increment, the enabled actions are the members' syntactic next steps
    that pass precondition and clock guard at the advanced valuation; the
    successor unions every member's program/automaton alternatives.  Empty
    targets (every automaton run dying) are omitted, which is sound because
    no extension of such a trace can satisfy the specification.  Members
    whose configuration strictly contains another one with the same residual
    program are dropped (acceptance is downward closed).
    """
    out = []
    for idx, delay in enumerate(increments(problem, state)):
        advanced = advance_state(state, delay)
        advanced_world = advanced.world()
        candidates: dict = {}
        for member in advanced.members:
            for action, rest in problem.program_steps(advanced_world, member.prog):
                candidates.setdefault(action, []).append((member, rest))
        for action in sorted(candidates):
            if not problem.poss(advanced_world, action):
                continue
            if not problem.guard_ok(advanced_world, action):
                continue
            next_world = problem.progress_fluents(advanced_world, action)
            symbol = problem.symbol(next_world)
            new_members = set()
            for member, rest in candidates[action]:
                for config in problem.symbol_step(member.config, symbol):
                    new_members.add(Member(rest, config))
            pruned = frozenset(
                m for m in new_members
                if not any(o.prog == m.prog and o.config < m.config for o in new_members)
            )
            if not pruned:
                continue
            out.append(((action, idx), DetState(
                next_world.fluents, next_world.funcs, next_world.clocks, pruned,
            )))
    return out


def det_successors(problem: Problem, state: DetState) -> list:
    """Canonicalized successors, deterministic order (increments ascending,
    actions lexicographic)."""
    return [
        (key, canonicalize(succ, problem.ata, problem.k))
        for key, succ in det_successors_exact(problem, state)
    ]


# --- the quasi-order -------------------------------------------------------------


def state_leq(problem: Problem, m1: Member, clocks1, m2: Member, clocks2) -> bool:
    """Product-state order: equal residual program and monotone domination
    of the canonical words of the combined clock sets."""
    if m1.prog != m2.prog:
        return False
    name = problem.ata.name_of
    c1 = frozenset(clocks1) | frozenset((name(l), v) for l, v in m1.config)
    c2 = frozenset(clocks2) | frozenset((name(l), v) for l, v in m2.config)
    return mono_dom_leq(canonical_word(c1, problem.k), canonical_word(c2, problem.k))


def det_leq(problem: Problem, c1: DetState, c2: DetState) -> bool:
    """Power set order over the state order; states with different worlds
    are incomparable."""
    if (c1.fluents, c1.funcs) != (c2.fluents, c2.funcs):
        return False
    return powerset_leq(
        c1.members,
        c2.members,
        lambda x, y: state_leq(problem, x, c1.clocks, y, c2.clocks),
    )


# --- search graph -----------------------------------------------------------------

BAD, SUCCESSFUL, DEAD, INNER = "bad", "successful", "dead", "inner"


@dataclass
class Node:
    nid: int
    state: DetState
    status: str = INNER
    dominator: Optional[int] = None
    edges: tuple = ()  # ((action, incr index), child nid)
    parent: Optional[tuple] = None  # (parent nid, action, incr index)
    label: Optional[bool] = None
    expanded: bool = False


@dataclass
class SearchGraph:
    root: int
    nodes: list
    explored: int = 0

    def node(self, nid: int) -> Node:
        return self.nodes[nid]

    def bad_nodes(self):
        return [n for n in self.nodes if n.status == BAD]


class _Frame:
    __slots__ = ("nid", "successors", "next_index", "edges")

    def __init__(self, nid, successors):
        self.nid = nid
        self.successors = successors
        self.next_index = 0
        self.edges = []


def build_graph(
    problem: Problem,
    root_state: Optional[DetState] = None,
    budget: Optional[int] = None,
    stop_on_bad: bool = False,
    controllable: Optional[Callable[[str], bool]] = None,
    prune: bool = False,
) -> SearchGraph:
    """Depth-first expansion of the determinized product into a finite graph.

    A node closes as soon as it is bad, dominated by an ancestor on the
    current path (the well-quasi-order makes this fire on every infinite
    path), or successor-less; canonically identical states share one node.
    With `prune`, a node stops expanding children once its game label is
    already decided by the expanded ones; its edge list then stays partial.
    """
    if prune and controllable is None:
        raise ValueError("pruning needs the controllable-action predicate")
    nodes: list[Node] = []
    table: dict = {}
    graph = SearchGraph(root=0, nodes=nodes)

    def new_node(state: DetState, parent, register: bool = True) -> Node:
        node = Node(nid=len(nodes), state=state, parent=parent)
        nodes.append(node)
        if register:
            table[state] = node.nid
        if budget is not None and len(nodes) > budget:
            raise ResourceError(f"node budget {budget} exhausted ({len(nodes)} nodes)")
        return node

    path: list[int] = []
    on_path: set[int] = set()

    def classify(node: Node) -> Optional[list]:
        """Set the node status; returns the successor list for inner nodes."""
        graph.explored += 1
        if is_bad(problem, node.state):
            node.status = BAD
            node.label = False
            node.expanded = True
            return None
        for anc_id in reversed(path):
            if det_leq(problem, nodes[anc_id].state, node.state):
                node.status = SUCCESSFUL
                node.dominator = anc_id
                node.expanded = True
                return None
        succ = det_successors(problem, node.state)
        if not succ:
            node.status = DEAD
            node.label = True
            node.expanded = True
            return None
        node.status = INNER
        return succ

    root_state = root_state if root_state is not None else initial_det_state(problem)
    root_node = new_node(root_state, None)
    root_succ = classify(root_node)
    if root_succ is None:
        return graph
    stack = [_Frame(root_node.nid, root_succ)]
    path.append(root_node.nid)
    on_path.add(root_node.nid)

    while stack:
        frame = stack[-1]
        node = nodes[frame.nid]
        if prune and node.label is None:
            decided = _three_valued_label(problem, graph, node, controllable,
                                          frame.successors, dict(frame.edges))
            if decided is not None:
                node.label = decided
                frame.next_index = len(frame.successors)  # skip the rest
        if frame.next_index >= len(frame.successors):
            node.edges = tuple(frame.edges)
            node.expanded = True
            stack.pop()
            on_path.discard(path.pop())
            continue
        key, child_state = frame.successors[frame.next_index]
        frame.next_index += 1
        existing = table.get(child_state)
        if existing is not None:
            if existing in on_path:
                # the successor closes a cycle: stand in a dominated leaf
                # (equality witnesses the quasi-order) so the graph stays
                # acyclic and the game loops through the dominator instead
                stub = new_node(child_state, (frame.nid, key[0], key[1]), register=False)
                stub.status = SUCCESSFUL
                stub.dominator = existing
                stub.expanded = True
                graph.explored += 1
                frame.edges.append((key, stub.nid))
            else:
                frame.edges.append((key, existing))
            continue
        child = new_node(child_state, (frame.nid, key[0], key[1]))
        frame.edges.append((key, child.nid))
        child_succ = classify(child)
        if child_succ is None:
            if stop_on_bad and child.status == BAD:
                for open_frame in stack:
                    nodes[open_frame.nid].edges = tuple(open_frame.edges)
                return graph
            continue
        stack.append(_Frame(child.nid, child_succ))
        path.append(child.nid)
        on_path.add(child.nid)

    return graph


# --- the timed game -------------------------------------------------------------


def _minimal_valid_sets(problem, node_state, keys, controllable):
    """Candidate controller choices over the enabled timed actions `keys`:
    all environment actions, plus, per controller action, that action with
    every environment action at the same or an earlier increment.  These
    minimal sets suffice: goodness is antitone in the choice and every valid
    choice contains one of them.  The empty choice is valid only at final
    states without environment moves."""
    env = [k for k in keys if not controllable(k[0])]
    ctl = [k for k in keys if controllable(k[0])]
    sets = []
    if env:
        sets.append(frozenset(env))
    elif is_final_state(problem, node_state):
        sets.append(frozenset())
    for key in ctl:
        _, idx = key
        sets.append(frozenset({key} | {e for e in env if e[1] <= idx}))
    return sets


def _three_valued_label(problem, graph, node, controllable, successors, edge_map):
    """Evaluate a node's label with possibly-unexpanded children: True/False
    when decided regardless of the unknowns, None otherwise.  `successors`
    fixes the complete enabled set; `edge_map` the children built so far."""
    keys = [key for key, _ in successors]
    candidates = _minimal_valid_sets(problem, node.state, keys, controllable)
    if not candidates:
        return False

    def label_of(key):
        cid = edge_map.get(key)
        return None if cid is None else graph.node(cid).label

    some_unknown = False
    all_false = True
    for choice in candidates:
        labels = [label_of(key) for key in choice]
        if all(l is True for l in labels):
            return True
        if any(l is False for l in labels):
            continue
        all_false = False
        some_unknown = True
    if some_unknown:
        return None
    return False if all_false else None


def label_graph(problem: Problem, graph: SearchGraph, controllable: Callable[[str], bool]) -> bool:
    """Solve the safety game on the finite graph and label every node.

    A node is losing iff every valid controller choice hands the environment
    a losing successor; dominated leaves behave like their dominating
    ancestor (the controller can keep simulating that ancestor's strategy,
    and an endless play never completes a trace, hence is safe).  Computed
    as the least fixpoint of the environment attractor; nodes whose label
    was already committed during pruning keep it.
    """
    attr = set()
    rev: dict[int, set] = {n.nid: set() for n in graph.nodes}
    for node in graph.nodes:
        for _, cid in node.edges:
            rev[cid].add(node.nid)
        if node.status == SUCCESSFUL and node.dominator is not None:
            rev[node.dominator].add(node.nid)

    committed = {n.nid: n.label for n in graph.nodes if n.label is not None}
    attr |= {nid for nid, label in committed.items() if label is False}

    def loses(node: Node) -> bool:
        if node.nid in committed:
            return not committed[node.nid]
        if node.status == SUCCESSFUL:
            return node.dominator in attr
        edge_map = dict(node.edges)
        keys = list(edge_map)
        candidates = _minimal_valid_sets(problem, node.state, keys, controllable)
        if not candidates:
            return True
        return all(
            any(edge_map[key] in attr for key in choice) if choice else False
            for choice in candidates
        )

    from collections import deque

    work = deque(n.nid for n in graph.nodes)
    while work:
        nid = work.popleft()
        if nid in attr:
            continue
        if loses(graph.nodes[nid]):
            attr.add(nid)
            work.extend(rev[nid])

    for node in graph.nodes:
        node.label = node.nid not in attr
    return graph.nodes[graph.root].label


def check_for_controller(
    bat: Bat,
    program: Program,
    spec: MtlFormula,
    controllable: Callable[[str], bool],
    budget: Optional[int] = None,
    prune: bool = False,
):
    """Whether a controller avoiding the undesired behavior exists; returns
    (verdict, labeled graph, problem) so a controller can be extracted."""
    problem = build_problem(bat, program, spec)
    graph = build_graph(
        problem, budget=budget,
        controllable=controllable, prune=prune,
    )
    result = label_graph(problem, graph, controllable)
    return result, graph, problem


# --- verification ----------------------------------------------------------------


@dataclass(frozen=True)
class Verdict:
    safe: bool
    counterexample: Optional[tuple] = None  # ((action, absolute time), ...)
    nodes: int = 0


def replay_path(problem: Problem, keys: Iterable[tuple]) -> tuple:
    """Execute (action, increment index) decisions on the exact product and
    return the resulting timed trace; region equivalence guarantees the
    indices remain valid."""
    state = exact_initial_state(problem)
    now = Fraction(0)
    trace = []
    for action, idx in keys:
        incs = increments(problem, state)
        delay = incs[idx]
        successors = dict(det_successors_exact(problem, state))
        succ = successors.get((action, idx))
        if succ is None:
            raise AssertionError("replay diverged from the abstract path")
        now += delay
        trace.append((action, now))
        state = succ
    return tuple(trace)


def path_to(graph: SearchGraph, nid: int) -> list:
    keys = []
    node = graph.node(nid)
    while node.parent is not None:
        pid, action, idx = node.parent
        keys.append((action, idx))
        node = graph.node(pid)
    keys.reverse()
    return keys


def verify(bat: Bat, program: Program, spec: MtlFormula, budget: Optional[int] = None) -> Verdict:
    """Safe iff no finite completed execution satisfies the specification;
    Unsafe verdicts carry a concrete rational counterexample trace."""
    problem = build_problem(bat, program, spec)
    graph = build_graph(problem, budget=budget, stop_on_bad=True)
    bad = graph.bad_nodes()
    if not bad:
        return Verdict(safe=True, nodes=len(graph.nodes))
    trace = replay_path(problem, path_to(graph, bad[0].nid))
    return Verdict(safe=False, counterexample=trace, nodes=len(graph.nodes))


def trace_to_word(bat: Bat, trace: tuple, atom_filter: Optional[frozenset] = None) -> TimedWord:
    """State-based timed word of a trace: the initial fluents at time zero,
    then the fluents after each action."""
    entries = []
    state = bat.initial
    now = Fraction(0)

    def symbols(s):
        out = frozenset(s.fluents)
        return out if atom_filter is None else out & atom_filter

    entries.append((symbols(state), Fraction(0)))
    for action, t in trace:
        t = Fraction(t)
        state = golog.progress(bat, state.advanced(t - now), action)
        now = t
        entries.append((symbols(state), t))
    return TimedWord(tuple(entries))


def graph_debug_json(problem: Problem, graph: SearchGraph) -> dict:
    """Inspection dump of the search graph: per node the status, label,
    member programs, and the canonical word of the pooled clock set (a JSON
    array of arrays of [name, regionIndex])."""
    nodes = []
    for node in graph.nodes:
        pooled = pooled_clock_set(node.state, problem.ata)
        nodes.append({
            "id": node.nid,
            "status": node.status,
            "label": node.label,
            "fluents": sorted(node.state.fluents),
            "programs": sorted({str(m.prog) for m in node.state.members}),
            "canonicalWord": canonical_word(pooled, problem.k).to_json(),
            "edges": [
                {"action": action, "increment": idx, "to": cid}
                for (action, idx), cid in node.edges
            ],
        })
    return {"root": graph.root, "maxConstant": problem.k, "nodes": nodes}


# --- controller extraction ---------------------------------------------------------


@dataclass(frozen=True)
class ControllerEdge:
    source: int
    action: str
    incr_index: int
    guard: ClockConstraint
    resets: frozenset
    target: int


@dataclass
class Controller:
    """Synthesized controller: locations are winning graph nodes, edges the
    good timed actions with region guards over the program clocks."""

    initial: int
    locations: tuple
    edges: tuple
    problem: Problem
    graph: SearchGraph
    controllable: Callable[[str], bool]
    tie_warnings: tuple = ()

    def edges_from(self, location: int):
        return [e for e in self.edges if e.source == location]

    def to_ta(self):
        from .timed_automata import Switch, make_ta

        switches = [
            Switch(f"n{e.source}", e.action, e.guard, e.resets, f"n{e.target}")
            for e in self.edges
        ]
        return make_ta(
            locations=[f"n{l}" for l in self.locations],
            initial=f"n{self.initial}",
            finals=[
                f"n{l}" for l in self.locations
                if is_final_state(self.problem, self.graph.node(l).state)
            ],
            clocks=self.problem.bat.clocks,
            invariants={},
            switches=switches,
        )


def _region_guard(problem: Problem, state: DetState, delay: Fraction) -> ClockConstraint:
    """Box constraint over the program clocks describing their individual
    regions after the delay (fractional-part ordering between clocks is not
    expressible without diagonal constraints and is dropped)."""
    atoms = []
    for clock, value in state.clocks:
        v = value + delay
        if v > problem.k:
            atoms.append((clock, ">", problem.k))
        elif v.denominator == 1:
            atoms.append((clock, "=", int(v)))
        else:
            floor_v = int(v)
            atoms.append((clock, ">", floor_v))
            atoms.append((clock, "<", floor_v + 1))
    return ClockConstraint(tuple(atoms))


def extract_controller(problem: Problem, graph: SearchGraph, controllable) -> Controller:
    """Keep, from every reachable winning node, each edge into a winning
    node; edges into dominated leaves loop back to the dominating ancestor.
    Same-increment ties between controller and environment actions are
    reported (preemption is interpreted strictly at region granularity)."""
    root = graph.node(graph.root)
    if root.label is not True:
        raise NoControllerError("the initial node is losing; no controller exists")

    def redirect(nid: int) -> int:
        node = graph.node(nid)
        while node.status == SUCCESSFUL:
            node = graph.node(node.dominator)
        return node.nid

    ties = []
    edges = []
    reachable = {graph.root}
    frontier = [graph.root]
    while frontier:
        nid = frontier.pop()
        node = graph.node(nid)
        incs = increments(problem, node.state)
        env_at = {}
        for (action, idx), _ in node.edges:
            if not controllable(action):
                env_at.setdefault(idx, []).append(action)
        for (action, idx), cid in node.edges:
            target = redirect(cid)
            if graph.node(target).label is not True:
                continue
            if controllable(action) and env_at.get(idx):
                ties.append(
                    f"node {nid}: controller action {action} shares increment "
                    f"{idx} with environment action(s) {sorted(env_at[idx])}"
                )
            edges.append(ControllerEdge(
                source=nid,
                action=action,
                incr_index=idx,
                guard=_region_guard(problem, node.state, incs[idx]),
                resets=problem.bat.actions[action].resets,
                target=target,
            ))
            if target not in reachable:
                reachable.add(target)
                frontier.append(target)
    return Controller(
        initial=graph.root,
        locations=tuple(sorted(reachable)),
        edges=tuple(e for e in edges if e.source in reachable),
        problem=problem,
        graph=graph,
        controllable=controllable,
        tie_warnings=tuple(ties),
    )


# --- controller simulation -----------------------------------------------------------


@dataclass
class SimulationReport:
    trials: int
    completed: int
    violations: tuple
    condition_failures: tuple

    @property
    def ok(self) -> bool:
        return not self.violations and not self.condition_failures


def simulate_controller(
    controller: Controller,
    trials: int = 500,
    seed: int = 0,
    max_steps: int = 400,
) -> SimulationReport:
    """Drive the exact product under the controller against randomized
    environment resolutions; check every completed trace with the
    independent semantics oracle.

    Each step enumerates the real region increments, forms the controller's
    selected timed actions, asserts the controller conditions (selected
    actions enabled; enabled environment moves selected or strictly
    preempted; empty selection only at final states), and lets a seeded
    adversary pick, biased towards region boundaries.
    """
    import random

    problem = controller.problem
    graph = controller.graph
    controllable = controller.controllable
    rng = random.Random(seed)
    violations = []
    failures = []
    completed = 0

    for trial in range(trials):
        node = graph.node(controller.initial)
        state = exact_initial_state(problem)
        now = Fraction(0)
        trace = []
        ended = False
        for _ in range(max_steps):
            real_succ = dict(det_successors_exact(problem, state))
            selected = {
                (e.action, e.incr_index): e for e in controller.edges_from(node.nid)
            }
            for key in selected:
                if key not in real_succ:
                    failures.append(
                        f"trial {trial}: selected {key} not enabled at node {node.nid}"
                    )
            min_ctl = min(
                (idx for (a, idx) in selected if controllable(a)), default=None
            )
            for action, idx in real_succ:
                if controllable(action) or (action, idx) in selected:
                    continue
                if min_ctl is None or min_ctl >= idx:
                    failures.append(
                        f"trial {trial}: environment action {(action, idx)} neither "
                        f"selected nor preempted at node {node.nid}"
                    )
            if not selected:
                # stopping is fine at final states and at stuck states (the
                # play cannot be extended, so no completed trace arises)
                if real_succ and not is_final_state(problem, state):
                    failures.append(
                        f"trial {trial}: empty selection at non-final node {node.nid}"
                    )
                ended = True
                break
            keys = sorted(selected)
            if rng.random() < 0.5:
                key = min(keys, key=lambda k: k[1])
            else:
                key = rng.choice(keys)
            succ = real_succ.get(key)
            if succ is None:
                ended = True  # selection error already recorded
                break
            incs = increments(problem, state)
            now += incs[key[1]]
            trace.append((key[0], now))
            state = succ
            node = graph.node(selected[key].target)
        if not ended:
            continue
        if is_final_state(problem, state):
            completed += 1
            word = trace_to_word(problem.bat, tuple(trace), problem.ata.atom_universe)
            if mtl.satisfies(word, 0, problem.spec):
                violations.append(tuple(trace))
    return SimulationReport(
        trials=trials,
        completed=completed,
        violations=tuple(violations),
        condition_failures=tuple(failures),
    )

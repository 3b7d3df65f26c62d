"""Clocks, regions, region increments, canonical words and quasi-orders.

All clock arithmetic is exact: values are `fractions.Fraction`, never floats.
A "clock set" in this module is a set of (name, value) pairs rather than a
mapping, because alternating automata may carry the same name with several
different clock values at once.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import floor, lcm
from typing import Callable, Iterable, Mapping

Q = Fraction

RELATIONS = ("<", "<=", "=", ">=", ">")


def as_fraction(x) -> Fraction:
    """Convert ints, Fractions, and 'p/q' strings to an exact Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"not an exact rational: {x!r}")


def format_fraction(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def compare(value: Fraction, rel: str, const: Fraction) -> bool:
    if rel == "<":
        return value < const
    if rel == "<=":
        return value <= const
    if rel == "=":
        return value == const
    if rel == ">=":
        return value >= const
    if rel == ">":
        return value > const
    raise ValueError(f"unknown relation {rel!r}")


@dataclass(frozen=True)
class ClockConstraint:
    """Conjunction of atoms ``clock rel constant``; the empty conjunction is true.

    Constants are naturals; rational inputs must be pre-scaled (see `scale_lcm`).
    """

    atoms: tuple[tuple[str, str, int], ...] = ()

    def __post_init__(self):
        for clock, rel, const in self.atoms:
            if rel not in RELATIONS:
                raise ValueError(f"unknown relation {rel!r}")
            if not isinstance(const, int) or const < 0:
                raise ValueError(f"constraint constant must be a natural, got {const!r}")

    def clocks(self) -> frozenset[str]:
        return frozenset(clock for clock, _, _ in self.atoms)

    def max_constant(self) -> int:
        return max((const for _, _, const in self.atoms), default=0)

    def conjoin(self, other: "ClockConstraint") -> "ClockConstraint":
        return ClockConstraint(self.atoms + other.atoms)

    def rename(self, mapping: Mapping[str, str]) -> "ClockConstraint":
        return ClockConstraint(
            tuple((mapping.get(c, c), rel, k) for c, rel, k in self.atoms)
        )

    def __str__(self) -> str:
        if not self.atoms:
            return "true"
        return " & ".join(f"{c} {rel} {k}" for c, rel, k in self.atoms)


TRUE_CONSTRAINT = ClockConstraint()


def eval_constraint(valuation: Mapping[str, Fraction], g: ClockConstraint) -> bool:
    """True iff every atom of g holds under the valuation."""
    for clock, rel, const in g.atoms:
        if clock not in valuation:
            raise KeyError(f"unknown clock {clock!r} in constraint")
        if not compare(valuation[clock], rel, Fraction(const)):
            return False
    return True


def advance(valuation: Mapping[str, Fraction], d: Fraction) -> dict[str, Fraction]:
    """Valuation with every clock increased by exactly d (d >= 0)."""
    if d < 0:
        raise ValueError("time increments must be non-negative")
    return {name: value + d for name, value in valuation.items()}


def reset(valuation: Mapping[str, Fraction], names: Iterable[str]) -> dict[str, Fraction]:
    """Valuation with the given clocks set to 0, others unchanged."""
    names = set(names)
    unknown = names - set(valuation)
    if unknown:
        raise KeyError(f"cannot reset undeclared clocks: {sorted(unknown)}")
    return {name: Fraction(0) if name in names else value for name, value in valuation.items()}


# --- regions -----------------------------------------------------------------

def region_index(value: Fraction, k: int) -> int:
    """Index of the region of `value` for maximal constant k.

    Even index 2i is the point region {i}, odd 2i+1 the open interval (i, i+1),
    and 2k+1 the unbounded region of all values above k.
    """
    if value < 0:
        raise ValueError("clock values are non-negative")
    if value > k:
        return 2 * k + 1
    i = floor(value)
    return 2 * i if value == i else 2 * i + 1


def fract(value: Fraction, k: int) -> Fraction:
    """Fractional part; values above the maximal constant count as 0."""
    if value > k:
        return Fraction(0)
    return value - floor(value)


ClockSet = frozenset  # of (name, Fraction) pairs


def _as_clock_set(c: Iterable[tuple[str, Fraction]]) -> frozenset[tuple[str, Fraction]]:
    return frozenset((name, as_fraction(value)) for name, value in c)


@dataclass(frozen=True)
class CanonicalWord:
    """Region-abstracted clock set: letters partition the names by fractional
    part, ordered by increasing fractional part, each entry tagged with its
    region index.  All integer-valued and above-maximal entries share the
    first letter (their fractional part counts as 0).
    """

    letters: tuple[frozenset[tuple[str, int]], ...]

    def __str__(self) -> str:
        rendered = []
        for letter in self.letters:
            inner = ", ".join(f"({n}, {r})" for n, r in sorted(letter))
            rendered.append("{" + inner + "}")
        return "(" + ", ".join(rendered) + ")"

    def to_json(self) -> list[list[list]]:
        return [[list(entry) for entry in sorted(letter)] for letter in self.letters]


def canonical_word(c: Iterable[tuple[str, Fraction]], k: int) -> CanonicalWord:
    """Abstraction of a clock set: group by fractional part, order by it."""
    groups: dict[Fraction, set[tuple[str, int]]] = {}
    for name, value in _as_clock_set(c):
        groups.setdefault(fract(value, k), set()).add((name, region_index(value, k)))
    letters = tuple(frozenset(groups[f]) for f in sorted(groups))
    return CanonicalWord(letters)


def region_equivalent(
    c1: Iterable[tuple[str, Fraction]], c2: Iterable[tuple[str, Fraction]], k: int
) -> bool:
    """True iff the two clock sets lie in the same region.

    Equivalence requires a name-preserving bijection matching region indices
    and the ordering (including ties) of fractional parts; this holds exactly
    when the canonical words coincide.
    """
    s1, s2 = _as_clock_set(c1), _as_clock_set(c2)
    from collections import Counter

    if Counter(n for n, _ in s1) != Counter(n for n, _ in s2):
        raise ValueError("clock sets must range over the same names")
    return canonical_word(s1, k) == canonical_word(s2, k)


def region_increment(c: Iterable[tuple[str, Fraction]], k: int) -> Fraction:
    """Canonical delay advancing the clock set into the next region.

    0 when every value already exceeds k; half the gap to the next integer
    when some value is an integer at most k; the full gap otherwise.  The
    maximal fractional part is taken over the whole set, where values above
    k contribute 0.
    """
    entries = _as_clock_set(c)
    if not entries or all(value > k for _, value in entries):
        return Fraction(0)
    mu = max(fract(value, k) for _, value in entries)
    if any(value <= k and value.denominator == 1 for _, value in entries):
        return (1 - mu) / 2
    return 1 - mu


def time_successors(
    c: Iterable[tuple[str, Fraction]], k: int
) -> list[tuple[Fraction, frozenset[tuple[str, Fraction]]]]:
    """All region-distinct time successors, as (accumulated delay, clock set).

    The first element is (0, c) itself; the last is the first successor in
    which every value exceeds k.
    """
    current = _as_clock_set(c)
    acc = Fraction(0)
    out = [(acc, current)]
    while current and any(value <= k for _, value in current):
        step = region_increment(current, k)
        acc += step
        current = frozenset((name, value + step) for name, value in current)
        out.append((acc, current))
    return out


def canonical_value_map(values: Iterable[Fraction], k: int) -> dict[Fraction, Fraction]:
    """Map each value to its joint region representative.

    Values above k clamp to k+1; fractional parts are replaced by their rank
    over a common denominator, preserving integer parts, ties, and order.
    Applying the map to a clock set yields a region-equivalent set with
    denominators bounded by the number of distinct fractional parts, and the
    map is idempotent on its own image.
    """
    values = sorted({as_fraction(v) for v in values})
    fracts = sorted({fract(v, k) for v in values})
    if not fracts:
        return {}
    if fracts[0] == 0:
        rep = {f: Fraction(i, len(fracts)) for i, f in enumerate(fracts)}
    else:
        rep = {f: Fraction(i + 1, len(fracts) + 1) for i, f in enumerate(fracts)}
    return {
        v: (Fraction(k + 1) if v > k else floor(v) + rep[fract(v, k)])
        for v in values
    }


def canonical_valuation(
    c: Iterable[tuple[str, Fraction]], k: int
) -> frozenset[tuple[str, Fraction]]:
    """Region representative of a clock set (see `canonical_value_map`)."""
    entries = _as_clock_set(c)
    mapping = canonical_value_map((v for _, v in entries), k)
    return frozenset((name, mapping[v]) for name, v in entries)


# --- quasi-orders ------------------------------------------------------------

def mono_dom_leq(w1: CanonicalWord, w2: CanonicalWord) -> bool:
    """Monotone domination: a strictly monotone injection h embedding w1 into
    w2 with letter-wise containment.  Greedy leftmost matching is complete
    because any single letter embeds independently of later choices.
    """
    j = 0
    for letter in w1.letters:
        while j < len(w2.letters) and not letter <= w2.letters[j]:
            j += 1
        if j == len(w2.letters):
            return False
        j += 1
    return True


def powerset_leq(xs: Iterable, ys: Iterable, leq: Callable) -> bool:
    """Power set order: every element of ys dominates some element of xs."""
    xs = list(xs)
    return all(any(leq(x, y) for x in xs) for y in ys)


# --- constant scaling --------------------------------------------------------

def scale_lcm(constants: Iterable[Fraction]) -> int:
    """Least common multiple of the denominators; multiplying all constants
    (and dividing all reported times) by it yields a natural-constant problem.
    """
    return lcm(1, *(as_fraction(c).denominator for c in constants))

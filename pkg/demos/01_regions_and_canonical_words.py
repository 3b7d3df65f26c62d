"""Clock regions, region increments, and canonical words.

Clock values that agree on integer parts (up to a maximal constant K) and
on the ordering of fractional parts are indistinguishable by any clock
constraint.  This demo walks through the finitely many region-distinct time
successors of a clock set and the canonical word abstraction that the
synthesis search uses as its well-quasi-ordered alphabet.
"""

from fractions import Fraction as Q

from timegolog.temporal import (
    canonical_word,
    mono_dom_leq,
    region_equivalent,
    region_increment,
    time_successors,
)

K = 2

print("== time successors ==")
clocks = frozenset({("c_b", Q(0)), ("c_phi", Q(1, 2))})
print(f"start: c_b=0, c_phi=1/2, maximal constant K={K}")
print(f"first region increment: {region_increment(clocks, K)}")
print()
print(f"{'acc. delay':>10} | clock values")
for acc, values in time_successors(clocks, K):
    rendered = ", ".join(f"{n}={v}" for n, v in sorted(values))
    print(f"{str(acc):>10} | {rendered}")
print()
print("the enumeration stops once every value exceeds K: all later delays")
print("lead to valuations no constraint with constants <= K can distinguish")
print()

print("== region equivalence ==")
pairs = [
    ({("c", Q(1, 2))}, {("c", Q(4, 5))}, 3),
    ({("c", Q(1))}, {("c", Q(11, 10))}, 3),
    ({("a", Q(1, 2)), ("b", Q(1, 5))}, {("a", Q(4, 5)), ("b", Q(3, 10))}, 3),
    ({("a", Q(1, 2)), ("b", Q(1, 5))}, {("a", Q(1, 2)), ("b", Q(3, 5))}, 3),
]
for c1, c2, k in pairs:
    verdict = region_equivalent(frozenset(c1), frozenset(c2), k)
    print(f"{sorted(c1)} ~ {sorted(c2)} (K={k})? {verdict}")
print("the last pair differs only in which fractional part is larger,")
print("which changes the order in which the clocks reach the next integer")
print()

print("== canonical words ==")
c = frozenset({("c1", Q(0)), ("c2", Q(1, 2)), ("c3", Q(13, 5)), ("x", Q(1, 2)), ("x", Q(2))})
w = canonical_word(c, K)
print(f"clock set: {sorted(c)}")
print(f"canonical word: {w}")
print("letters group names by fractional part (values above K count as")
print("fraction zero) and are ordered by it; each entry keeps its region index")
print()

print("== monotone domination ==")
small = canonical_word(frozenset({("q2", Q(9, 5))}), K)
big = canonical_word(frozenset({("q2", Q(9, 5)), ("phi3", Q(4, 5))}), K)
print(f"H(small) = {small}")
print(f"H(big)   = {big}")
print(f"small embeds into big: {mono_dom_leq(small, big)}")
print(f"big embeds into small: {mono_dom_leq(big, small)}")
print("a state with fewer pending obligations dominates: anything bad the")
print("small state can reach, the big state could reach too, so the search")
print("may stop expanding the big one")

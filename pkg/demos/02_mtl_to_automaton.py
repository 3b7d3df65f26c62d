"""Metric temporal logic on timed words, and its alternating automaton.

The formula here reads "within one time unit, the robot grasps while the
camera is off" — a specification of undesired behavior.  We evaluate it
directly with the point-based semantics, compile it into a single-clock
alternating timed automaton, and check that both judge the same words.
"""

from fractions import Fraction as Q

from timegolog import mtl
from timegolog.ata import accepts, ata_from_mtl, eta_table
from timegolog.mtl import And, Atom, Interval, Not, TRUE, Until, satisfies, word

phi_bad = Until(TRUE, And((Not(Atom("camOn")), Atom("grasping"))), Interval(0, 1))
print(f"specification of bad behavior: {phi_bad}")
print()

words = {
    "grasp at 1/2 with camera off": word((set(), 0), ({"grasping"}, "1/2")),
    "grasp at 2 (outside the bound)": word((set(), 0), ({"grasping"}, 2)),
    "camera on while grasping": word((set(), 0), ({"camOn", "grasping"}, "1/2")),
    "nothing ever happens": word((set(), 0), (set(), 3)),
}

print("== point-based semantics ==")
for label, rho in words.items():
    print(f"{label:35s} -> {'bad' if satisfies(rho, 0, phi_bad) else 'fine'}")
print()

print("== compiled automaton ==")
automaton = ata_from_mtl(mtl.to_pnf(phi_bad))
table = eta_table(automaton)
print(f"locations: {table['locations']} (accepting: {table['accepting'] or 'none'})")
print("transition formulas (location x read symbol set):")
for row in table["transitions"]:
    syms = "{" + ",".join(row["symbols"]) + "}"
    print(f"  {row['location']:5s} {syms:20s} -> {row['formula']}")
print()
print("reading {grasping} inside the bound discharges the obligation (the")
print("clock clause yields the empty model, which is accepting); any other")
print("symbol keeps waiting")
print()

print("== the two agree ==")
for label, rho in words.items():
    a = accepts(automaton, rho)
    s = satisfies(rho, 0, phi_bad)
    marker = "ok" if a == s else "MISMATCH"
    print(f"{label:35s} automaton={a!s:5} semantics={s!s:5} {marker}")

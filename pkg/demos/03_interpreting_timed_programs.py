"""Interpreting a timed agent program: truth, progression, regression.

The theory models a transport robot: it can drive between two machines,
grasp an object, and boot or stop its camera.  Durative actions are
start/end pairs; per-task clocks constrain the duration (driving takes 1-2
seconds, booting exactly 1).  We execute a trace forward and then answer
the same queries backward by regression, without touching any state.
"""

import json
from fractions import Fraction as Q
from pathlib import Path

from timegolog.golog import enabled_steps, holds, progress, regress, world_after
from timegolog.parsing import load_bat, load_program, parse_static

DATA = Path(__file__).parent / "data"

bat = load_bat(json.loads((DATA / "camera_bat.json").read_text()))
program = load_program(json.loads((DATA / "camera_program.json").read_text()), bat)

print("== the initial situation ==")
for text in ["(= robotAt m1)", "(objAt o1 m2)", "camOn", "(exists o (holding o))"]:
    print(f"{text:30s} -> {holds(bat, bat.initial, parse_static(text, bat))}")
print()

print("== stepping forward ==")
state = bat.initial
print("enabled first steps of the program:",
      sorted(a for a, _ in enabled_steps(bat, state, program)))
state = progress(bat, state, "start(drive(m1,m2))")
print("after start(drive(m1,m2)):")
print("  robot location:", state.fun_map["robotAt"], "(driving: no location)")
print("  drive clock reset:", state.clock_map["c_drive_m2"])
state = progress(bat, state.advanced(Q(3, 2)), "end(drive(m1,m2))")
print("after 3/2 seconds and end(drive(m1,m2)):")
print("  robot location:", state.fun_map["robotAt"])
print()

print("== a full trace ==")
trace = (
    ("start(drive(m1,m2))", Q(0)),
    ("start(bootCamera)", Q(1)),
    ("end(drive(m1,m2))", Q(3, 2)),
    ("end(bootCamera)", Q(2)),
    ("start(grasp(m2,o1))", Q(3)),
    ("end(grasp(m2,o1))", Q(5)),
)
final = world_after(bat, trace)
for text in ["(holding o1)", "camOn", "(= robotAt m2)"]:
    print(f"after the trace, {text:15s} -> {holds(bat, final, parse_static(text, bat))}")
print()

print("== the same answers by regression ==")
print("regression rewrites a query about the final situation into a query")
print("about the initial one: clock atoms shift by the elapsed time, fluent")
print("atoms are replaced by the successor state axioms' right-hand sides")
for text in ["(holding o1)", "camOn", "(= robotAt m2)", "(<= c_grasp 2)"]:
    phi = parse_static(text, bat)
    backward = holds(bat, bat.initial, regress(bat, trace, phi))
    forward = holds(bat, final, phi)
    print(f"{text:15s} forward={forward!s:5} regressed={backward!s:5}"
          f" {'ok' if forward == backward else 'MISMATCH'}")

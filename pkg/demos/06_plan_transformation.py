"""Plan transformation: realizing an abstract plan on a platform model.

A four-action transport plan (drive somewhere, pick an object) must respect
durations, a no-waiting constraint, and two platform chains: the camera has
to be off while driving except during the last four seconds, and on for the
whole pick.  The transformation encodes everything into one timed
automaton, finds an accepting run with the zone engine, and returns a fully
timed action sequence interleaving plan and platform actions.
"""

import json
from fractions import Fraction as Q
from pathlib import Path

from timegolog.parsing import load_ta
from timegolog.plantrans import (
    Plan,
    build_encoding,
    constraints_from_json,
    get_activations,
    transform_plan,
    validate_transformed,
)
from timegolog.temporal import format_fraction

DATA = Path(__file__).parent / "data"

plan = Plan(tuple(json.loads((DATA / "transport_plan.json").read_text())["actions"]))
platform = load_ta(json.loads((DATA / "camera_platform.json").read_text()))
constraints = constraints_from_json(
    json.loads((DATA / "transport_constraints.json").read_text())
)

print("plan:", " ; ".join(plan.actions))
print()
print("constraints:")
for c in constraints.rel:
    print(f"  actions {c.i} -> {c.j} within {c.interval}")
for chain in constraints.chain:
    stages = " then ".join(f"{beta} for {iv}" for beta, iv in chain.stages)
    print(f"  between {chain.alpha1} and {chain.alpha2}: {stages}")
    for act in sorted(get_activations(chain, plan), key=lambda a: a.s):
        print(f"    activation: actions {act.s} .. {act.e}")
print()

enc = build_encoding(plan, platform, constraints)
print(f"encoded product: {len(enc.locations)} locations, "
      f"{len(enc.switches)} switches, clocks {enc.clocks}")
print()

trace = transform_plan(plan, platform, constraints)
print("== realization ==")
for action, t in trace:
    origin = "plan    " if action in plan.actions else "platform"
    print(f"  {format_fraction(t):>4}  [{origin}] {action}")
print()
print("independent validation (trace-formula semantics):",
      validate_transformed(trace, plan, platform, constraints))
print()

witness = (
    ("start(goto(l1))", Q(0)),
    ("start(bootCamera)", Q(26)),
    ("end(goto(l1))", Q(30)),
    ("end(bootCamera)", Q(30)),
    ("start(pick(o1))", Q(30)),
    ("end(pick(o1))", Q(45)),
)
print("a hand-written realization validates too:",
      validate_transformed(witness, plan, platform, constraints))

# booting needs at least 4 seconds, but the camera must be off until the
# pick starts and on throughout it, with no time between drive and pick
impossible = constraints_from_json({
    "rel": [{"i": 2, "j": 3, "interval": {"lo": 0, "hi": 0}}],
    "chain": [
        {"stages": [{"beta": "camOff", "interval": {"lo": 0, "hi": None}}],
         "alpha1": "start:goto*", "alpha2": "start:pick*"},
        {"stages": [{"beta": "camOn", "interval": {"lo": 0, "hi": None}}],
         "alpha1": "start:pick*", "alpha2": "end:pick*"},
    ],
})
print("camera off until the pick, on during it, nothing in between:",
      transform_plan(plan, platform, impossible))

"""
GBPA curves for Haberman's survival data
========================================

Sweep each attribute with a step of 1 and write the mass of every subset
to CSV, ready for plotting.
"""

import sys

from opengbpa import SplitPlan, fit_models, generate_for_attribute, make_frame, split_leave_out
from opengbpa.datasets import load_haberman

ds = load_haberman()
train, _ = split_leave_out(ds, SplitPlan.leave_out(0.89, seed=0))
print(train.class_counts(), file=sys.stderr)
frame = make_frame(["a", "b"])
models = fit_models(train.rows, frame, ds.attributes)

ranges = {"age": range(25, 85), "year": range(55, 72), "nodes": range(0, 55)}
subsets = frame.power_set()
print("attribute,x," + ",".join(frame.format(b) for b in subsets))
for attr, xs in ranges.items():
    for x in xs:
        m = generate_for_attribute(models, attr, x)
        print(f"{attr},{x}," + ",".join(f"{m[b]:.4f}" for b in subsets))

# {a,b} is largest where the two class triangles cross
for attr, xs in ranges.items():
    best = max(xs, key=lambda x: generate_for_attribute(models, attr, x)[frame.full])
    print(f"{attr}: m(a,b) peaks at {best}", file=sys.stderr)

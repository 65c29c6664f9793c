"""
Classifying one Iris flower, open and closed world
==================================================

Fit triangular fuzzy numbers, turn each attribute reading into a GBPA,
fuse them and read off the decision.
"""

from opengbpa import classify_sample, fit_models, generate_for_attribute, make_frame, to_closed_world
from opengbpa.datasets import load_iris_table1_training, table1_models, table2_sample

# the bundled 40-per-class split reproduces the published model table
train = load_iris_table1_training()
models = fit_models(train.rows, make_frame(["a", "b", "c"]), train.attributes)
print(models.to_csv())

sample = table2_sample()
print("sample:", sample)

# one GBPA per attribute; note the mass left on the empty set
for attr in models.attributes:
    m = generate_for_attribute(table1_models(), attr, sample[attr])
    print(f"{attr}: {m}")

# open world: modified generalized combination rule
decision = classify_sample(table1_models(), sample)
print("open world ->", decision.labels, decision.fused)

# closed world: spread m(empty) over every other subset, then Dempster
sl = generate_for_attribute(table1_models(), "SL", sample["SL"])
print("SL closed:", to_closed_world(sl))
decision = classify_sample(table1_models(), sample, rule="dempster", world="closed")
print("closed world ->", decision.labels, decision.fused)

"""
Open-world tests, robustness and accuracy correction on Iris
============================================================
"""

from opengbpa import SplitPlan, corrected_accuracy, run_cross_validation, run_open_world, run_robustness
from opengbpa.datasets import load_iris

iris = load_iris()

# train on two classes, hide the third among the test samples
for frame in (["a", "b"], ["a", "c"], ["b", "c"]):
    report = run_open_world(iris, frame, SplitPlan.leave_out(0.8, seed=1))
    print(report.to_table(), end="\n\n")

# closed-world accuracy as the training share grows
curve = run_robustness(iris, [0.1, 0.2, 0.4, 0.6, 0.8, 0.9], repeats=10, seed=0)
print(curve.to_table(), end="\n\n")

# the 5-fold figure corrects the leave-out figure near 80% training
cv = run_cross_validation(iris, 5, repeats=10, seed=0)
print(cv.to_table())
print(f"corrected at 80%: {corrected_accuracy(curve.mean_at(0.8), cv.mean):.4f}")

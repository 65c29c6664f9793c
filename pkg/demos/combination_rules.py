"""
Three combination rules on conflicting evidence
===============================================
"""

from opengbpa import MassFunction, combine_all, dempster_combine, gcr_combine, make_frame, mgcr_combine, negate_bayesian

frame = make_frame(["A", "B", "C"], "closed")
m1 = MassFunction.from_labels(frame, {"A": 0.8, "C": 0.2})
m2 = MassFunction.from_labels(frame, {"B": 0.8, "C": 0.2})

# Dempster's rule puts everything on C although both sources doubt it
fused, report = dempster_combine(m1, m2)
print(f"Dempster: {fused}  k={report.k:.2f}")

# negating each source first gives a far less extreme answer
fused, _ = dempster_combine(negate_bayesian(m1), negate_bayesian(m2))
print("negated Dempster:", fused)

# without mass on the empty set both open-world rules agree with Dempster
world = frame.with_world("open")
o1, o2 = m1.with_frame(world), m2.with_frame(world)
print("GCR: ", gcr_combine(o1, o2).mass)
print("mGCR:", mgcr_combine(o1, o2).mass)

# with some ignorance on the empty set the two open-world rules part ways
u1 = MassFunction.from_labels(world, {"A": 0.6, (): 0.4})
u2 = MassFunction.from_labels(world, {"A": 0.5, "B": 0.3, (): 0.2})
print("GCR: ", gcr_combine(u1, u2).mass)
print("mGCR:", mgcr_combine(u1, u2).mass)

# more than two sources are folded left to right
print("fold:", combine_all("mgcr", [u1, u2, u1]))

"""Mass scans on the 2-bridge: a unit segment with a half-line at each end.

With no potential every point lies on a trail between the two half-lines,
so the minimum never drops below the soliton level and the rows sit at
threshold.  Switching on a bump potential pulls every row below it.
"""
import numpy as np

from graphnls import scan_mass, two_bridge_graph
from graphnls.scan import Problem, max_relative_concavity_defect, threshold_estimates

BUMP = ({"edge": "core", "kind": "bump",
         "params": {"center": 0.5, "width": 0.5, "height": 1.0, "ramp": 0.25}},)
masses = np.geomspace(0.2, 10.0, 8)

for label, problem in [("w = 0", Problem(two_bridge_graph())),
                       ("bump", Problem(two_bridge_graph(), BUMP))]:
    rows = scan_mass(problem, 4.0, masses, jobs=4)
    print(f"\n{label}")
    print("     mu      E_min       threshold   gap/|thr|   class           deloc")
    for r in rows:
        print(f"{r.mu:7.3f}  {r.E_min:11.5f}  {r.threshold:11.5f}  {r.gap / abs(r.threshold):9.2e}   "
              f"{r.cls.value:<15} {r.deloc:.2e}")
    lower, upper = threshold_estimates(rows)
    print(f"all rows below threshold up to {lower}, from {upper} on")
    print(f"largest concavity defect / |E_min|: {max_relative_concavity_defect(rows):.3f}")

"""
Vertical Chen inequality on two worked examples
===============================================

Two submersions from R^6 onto R^3. The first has totally geodesic fibres, so
the inequality is an equality. The second has fibres with nonzero mean
curvature and the gap is strictly positive.
"""
import numpy as np

from submersion_chen.config import load_catalog
from submersion_chen.inequalities import check_vertical, equality_diagnostics
from submersion_chen.oneill import oneill_data

###############################################################################
# Equality case
# -------------
gig = load_catalog("gigseh").build_setup()
x = np.ones(6)
r = check_vertical(gig, x, (0, 1))
print(f"gigseh: lhs={r.lhs:.6g} rhs={r.rhs:.6g} gap={r.gap:.3g} equality={r.equality}")
for c in equality_diagnostics(gig, x).conditions:
    print(f"  [{c.frame}] {c.label:40s} residual={c.residual:.2e}")

###############################################################################
# Strict case
# -----------
# The fibres of this map are not minimal; the mean curvature vector has
# squared norm 2/9 at the origin.
gir = load_catalog("girmednh").build_setup()
d = oneill_data(gir, np.zeros(6))
print(f"\ngirmednh: |H|^2={d.normH2:.6f}  N on the horizontal frame={np.round(d.N_frame, 6)}")
r = check_vertical(gir, np.zeros(6), (0, 1))
print(f"girmednh: lhs={r.lhs:.6g} rhs={r.rhs:.6g} gap={r.gap:.6g}")
for c in r.equality_conditions:
    print(f"  [{c.frame:9s}] {c.label:40s} residual={c.residual:.3g}")

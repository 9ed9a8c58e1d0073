"""
Where the stated inequalities break
===================================

1. Minimal fibres whose second fundamental form has an off-diagonal entry
   T(V1, V3) violate the vertical lower bound checked by `check_vertical`.
   The same data do satisfy the reversed upper bound.
2. A Sasakian submersion R^5 -> R^2 breaks the mixed horizontal/vertical
   inequality; for T = 0 its gap is a combination of A-tensor norms with a
   negative coefficient on |A_12|^2.
"""
import numpy as np

from submersion_chen.config import load_catalog
from submersion_chen.frames import SmoothMap, SubmersionSetup
from submersion_chen.inequalities import chen_coefficient, check_theorem, check_vertical
from submersion_chen.metric import MetricField

###############################################################################
# Twisted slices
# --------------
g = MetricField([["1", 0, "x4", 0], [0, "1", 0, 0], ["x4", 0, "1", 0], [0, 0, 0, "1"]])
setup = SubmersionSetup(g, MetricField([["1"]], prefix="y"), SmoothMap(["x4"], 4))
r = check_vertical(setup, np.zeros(4), (0, 1))
print(f"twisted slices: |H|^2={r.terms['normH2']:.3g}")
print(f"  lower bound: lhs={r.lhs:.6g} rhs={r.rhs:.6g} gap={r.gap:.6g} holds={r.holds}")
print(f"  coefficient r^2(r-2)/(2(r-1)) for r=3: {chen_coefficient(3):.6g}")

###############################################################################
# Sasakian example
# ----------------
cfg = load_catalog("sasakian_r5")
sas = cfg.build_setup()
for th in ("thm41", "gssf_thm47"):
    r = check_theorem(th, sas, cfg.points[0], model=cfg.model)
    print(f"sasakian {th}: lhs={r.lhs:.6g} rhs={r.rhs:.6g} gap={r.gap:.6g} holds={r.holds}")
    print(f"  3*sum_j>2 |A_1j|^2 = {r.terms['A_sum_first_row']:.6g}  "
          f"1.5*sum_ij>=2 |A_ij|^2 = {r.terms['A_sum_block']:.6g}  |A_12|^2 = {r.terms['A12_sq']:.6g}")

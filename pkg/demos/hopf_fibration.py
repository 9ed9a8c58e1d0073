"""
Quaternionic Hopf map S^7 -> S^4(1/2)
=====================================

The fibres are totally geodesic unit 3-spheres and the base is a sphere of
curvature 4. Both the vertical inequality and its mixed horizontal/vertical
counterpart can be read off the real space-form model with c = 1.
"""
from submersion_chen.config import load_catalog
from submersion_chen.inequalities import check_theorem
from submersion_chen.invariants import invariant_bundle
from submersion_chen.space_forms import model_fit

cfg = load_catalog("hopf_s7_s4")
setup = cfg.build_setup()
p = cfg.points[0]

print("model fit residual:", model_fit(setup, [p], cfg.model).residual)

b = invariant_bundle(setup, p)
print(f"tau(M1)={b.tau_M1:.6g} tau_V(ker)={b.tauV_ker:.6g} tau_H(perp)={b.tauH_perp:.6g}")
print(f"vertical K range [{b.infK['vertical']:.6g}, {b.supK['vertical']:.6g}]  "
      f"horizontal K range [{b.infK['horizontal']:.6g}, {b.supK['horizontal']:.6g}]")

for th in ("rsf_thm36", "rsf_thm43", "thm32"):
    r = check_theorem(th, setup, p, model=cfg.model)
    print(f"{th:10s} lhs={r.lhs:.6g} rhs={r.rhs:.6g} gap={r.gap:.6g} holds={r.holds}")
    for name, xc in r.cross_checks.items():
        print(f"    cross-check {name}: residual {xc['residual']:.1e}")

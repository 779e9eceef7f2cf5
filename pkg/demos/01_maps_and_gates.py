#!/usr/bin/env python3
"""Tour of the map family: presets, single steps, orbits, the injective
3D extension, and the parameter gates.

The maps act piecewise on a planar domain, contracting horizontally by
lam < 1 and stretching vertically by gam > 1.  The gate report checks the
sufficient conditions for an absolutely continuous invariant measure:
area expansion lam_min*gam_min^2/gam_max > 1 plus one of three
translation-ratio conditions.
"""

from hypaff import (
    LiftedPoint,
    Point,
    apply,
    gate_corollary,
    gate_theorem,
    lift_apply,
    orbit,
    preset_belykh,
    preset_fat_baker,
)

m = preset_belykh(lam=0.55, gam=2.0, k=0.0)
print(f"map: {m.name}, domain bounds {m.bounds}")

p = Point(0.2, 0.3)
img, piece = apply(m, p)
print(f"one step: ({p.x}, {p.y}) -> ({img.x:.3f}, {img.y:.3f}) via piece {piece}")

fixed = orbit(m, Point(1.0, 1.0), 5)
print("orbit of the branch-1 fixed point (1,1):",
      [(round(q.x, 3), round(q.y, 3)) for q, _ in fixed.states])

# The 3D extension separates branch histories in the third coordinate:
# theta contracts x3 into the slot [i/(a+1), i/(a+1)+theta] of branch i.
q = LiftedPoint(0.2, 0.3, 0.0)
lifted = lift_apply(m, theta=0.25, q=q)
print(f"lifted step: x3 = {q.x3} -> {lifted.x3:.4f} (branch slot 1/3)")

print("\n--- parameter gates ---")
for lam, gam in [(0.55, 2.0), (0.52, 2.0), (0.6, 1.7), (0.45, 2.0), (0.65, 2.0)]:
    rep = gate_corollary(preset_belykh(lam, gam, 0.0))
    verdict = "PASS" if rep.overall else "fail"
    conds = " ".join(
        f"n={c.n}:{'ok' if c.passed else '--'}" for c in rep.passes
    )
    print(f"lam={lam:4} gam={gam:3}: area={rep.area_expansion:.3f} "
          f"C={rep.c_ratio:.1f} [{conds}] -> {verdict}")

print("\nscaled family over an interval (t0, t1) = (0.95, 1.0):")
rep = gate_theorem(preset_fat_baker(0.55), 0.95, 1.0)
print(f"area={rep.area_expansion:.3f} overall={rep.overall} "
      f"series requirement t1*lam_max < {rep.t_requirement} "
      f"met={rep.t_requirement_met}")

#!/usr/bin/env python3
"""Refined partitions and the expansion-versus-multiplicity check.

Refining the piece partition k times yields the continuity domains of
the first k+1 iterates: each cell carries the itinerary word its points
realize.  The boundary segments of the depth-tau partition form a curve
arrangement; D_tau is the largest number of distinct curves through one
point, and the structural check asks for gamma_min^tau > D_tau + 1.
"""

from hypaff import check_A2, compute_D_tau, preset_belykh, refine_to_depth

m = preset_belykh(lam=0.5, gam=2.0, k=0.0)

print("depth  cells  boundary-curves  total-area")
for depth in range(5):
    z = refine_to_depth(m, depth)
    print(f"{depth:5d}  {z.n_cells:5d}  {len(z.boundary):15d}  {z.total_area():.9f}")

z = refine_to_depth(m, 2)
print("\nwords at depth 2 (forward itineraries of the cells):")
print(" ", sorted(z.words()))

for tau in (1, 2, 3):
    d, witness = compute_D_tau(m, tau)
    print(f"D_{tau} = {d} attained at ({witness.x:.3f}, {witness.y:.3f})")

result = check_A2(m, tau_max=5)
if result.passed:
    print(f"\ncheck passes at tau={result.tau}: "
          f"{result.gamma_min}^{result.tau} > {result.d_tau} + 1 "
          f"(margin {result.margin:.2f})")
else:
    print(f"\ncheck fails up to tau_max; tried {result.tried}")

# a weakly expanding member fails: 1.01^tau cannot beat D_tau + 1 = 3
weak = check_A2(preset_belykh(0.5, 1.01, 0.0), tau_max=3)
print(f"weak expansion gam=1.01: passed={weak.passed}, tried={weak.tried}")

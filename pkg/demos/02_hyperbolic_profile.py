"""Separation profiles: hyperbolic disks grow like log n, grids like sqrt n.

Run from the repository root:

    python3 demos/02_hyperbolic_profile.py
"""

from seplab import TessellationSpec, grid, tessellation_disk
from seplab.profile import (classify_growth, compare_profiles,
                            fit_against_log, profile_estimate)
from seplab.spheres import bounded_sphere_separation_test, delta_hat


def show_curve(name, curve):
    print(f"{name}: {len(curve.points)} sampled sizes")
    print("      n  lower  upper  source")
    for p in curve.points:
        print(f"  {p.n:>5}  {p.lower:>5}  {p.upper:>5}  {p.source}")


print("Building the {7,3} disk of radius 10 and a 40x40 grid control...")
disk = tessellation_disk(TessellationSpec(7, 3), 10)
g40 = grid(40, 40)

hyper = profile_estimate(disk.graph, {"kind": "balls", "root": 0},
                         exact_threshold=70)
show_curve("\n{7,3} balls", hyper)
a, b, r2 = fit_against_log(hyper)
print(f"  log fit: {a:.3f}*ln(n) {b:+.3f}, R^2 = {r2:.4f}")
print(f"  classified: {classify_growth(hyper)}")

euclid = profile_estimate(g40, {"kind": "square-subgrids",
                                "rows": 40, "cols": 40})
show_curve("\ngrid(40,40) subgrids", euclid)
print(f"  classified: {classify_growth(euclid)}")

print("\nOrder comparison over the shared n range:")
cmp = compare_profiles(hyper, euclid)
print(f"  {cmp.verdict} (witness constants D_gh={cmp.d_gh}, D_hg={cmp.d_hg})")
print(f"  note: {cmp.note}")

print("\nSphere neighborhoods of the radius-12 disk stay cheap to cut:")
disk12 = tessellation_disk(TessellationSpec(7, 3), 12)
d = delta_hat(disk12.root)
rep = bounded_sphere_separation_test(disk12.root, d, range(4, 11))
print("      R  |S_R|  thick  cut range")
for row in rep.rows:
    print(f"  {row.R:>5}  {row.sphere_size:>5}  {row.thick_size:>5}  "
          f"[{row.bounds.lower}, {row.bounds.upper}]")
print(f"  delta = {d}, max upper bound {rep.max_upper}, "
      f"slope vs R {rep.upper_slope:.3f}")

"""Tour of deformed cusp groups on the boundary.

The cusp group of a Bianchi lattice is generated by two translations
T = (a, 0) and U = (b1, b2) of the Heisenberg boundary.  Bending turns
U into a rotation-translation; the closed-form orbit, its matrix-action
oracle, the discreteness gap probe, and the exact R x S^1 trichotomy
all live here.

Run:  python demos/cusp_orbit_tour.py
"""

import io

import numpy as np

from cuspdeform import (Angle, HeisPoint, RS1Element, Surd, bianchi_family,
                        orbit_gap_probe, orbit_point,
                        orbit_point_via_matrices, orbit_points, rs1_classify,
                        rs1_probe, write_orbit_csv)
from cuspdeform.heisenberg import bent_cusp_U, cusp_translation_T

print("=" * 72)
print("Boundary orbits of deformed cusp groups")
print("=" * 72)

fam = bianchi_family(2, "su31")
params = fam.cusp_params(Angle.pi_fraction(1, 3))
print(f"\nd=2 cusp: a={float(params.a):+.4f}, b1={float(params.b1):+.4f},"
      f" b2={float(params.b2):+.4f}, u=e^(i pi/3)")

p0 = HeisPoint((0.3 + 0.4j, 0.2 - 0.1j), 0.5)
closed = orbit_point(params, 3, 5, p0)
oracle = orbit_point_via_matrices(params, 3, 5, p0)
dev = max(max(abs(x - y) for x, y in zip(closed.z, oracle.z)),
          abs(closed.t - oracle.t))
print(f"closed form vs matrix action at (m,n)=(3,5): deviation {dev:.2e}")

print("\northogonal cusp (b1 = 0): the orbit stays uniformly separated --")
gT, gU = cusp_translation_T(params), bent_cusp_U(params)
for R in (10, 20, 40):
    gap = orbit_gap_probe(gT, gU, HeisPoint.origin(2), R)
    print(f"  word radius {R:2d}: min positive gap {gap:.4f}")

print("\nnon-orthogonal SO(4,1) cusp (d=7, theta=1 rad): gaps collapse --")
fam7 = bianchi_family(7, "so41", theta=Angle.radians(1.0))
gT7 = np.asarray(fam7.images["t"], dtype=complex)
gU7 = np.asarray(fam7.images["u"], dtype=complex)
for R in (10, 20, 40):
    gap = orbit_gap_probe(gT7, gU7, HeisPoint.origin(3), R)
    print(f"  word radius {R:2d}: min positive gap {gap:.4f}")

print("\nthe exact trichotomy behind it, on (translation, angle) data:")
T = RS1Element(Surd(1), Angle.zero())
cases = [
    ("a=1, b=sqrt2, theta=0      ", RS1Element(Surd(1, 2), Angle.zero())),
    ("a=1, b=1, theta=pi/2       ", RS1Element(Surd(1), Angle.pi_fraction(1, 2))),
    ("a=1, b=1, theta=1 rad      ", RS1Element(Surd(1), Angle.radians(1.0))),
]
for label, U in cases:
    verdict = rs1_classify(T, U)
    gap = rs1_probe(T, U, n_elements=10000)
    print(f"  {label} -> {str(verdict):<26} probe min distance {gap:.2e}")

print("\norbit dumps ship as CSV (same schema as the CLI `orbit` command):")
pts = orbit_points(gT, gU, HeisPoint.origin(2), 2)
buf = io.StringIO()
write_orbit_csv(buf, pts, gap=orbit_gap_probe(gT, gU, HeisPoint.origin(2), 2))
for line in buf.getvalue().split("\r\n")[:4]:
    print("  " + line)
print("  ...")
print("  " + buf.getvalue().strip().split("\r\n")[-1])

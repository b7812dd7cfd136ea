"""Z/p actions: regularity, fixed subcomplexes, and Lefschetz numbers.

The fixed-point index identity: the Lefschetz number of every power
equals the Euler characteristic of that power's fixed set.
"""

from betticong import QQ, fixed_subcomplex, lefschetz_number, make_regular
from betticong.corpus import (
    disc_rotation,
    free_polygon_action,
    s3_free_action,
    sphere_rotation,
    torus_rotation,
)

for name, action in [
    ("free rotation of the 5-gon (p=5)", free_polygon_action(5)),
    ("rotation of S^2 (p=3)", sphere_rotation(3)),
    ("shift of the grid torus (p=3)", torus_rotation(3)),
    ("free diagonal rotation of S^3 (p=3)", s3_free_action()),
]:
    reg = make_regular(action)
    F = fixed_subcomplex(reg)
    chi = F.euler_characteristic()
    lam = lefschetz_number(action)
    print(f"{name}")
    print(f"  fixed set f-vector {F.f_vector if F.dim >= 0 else '(empty)'}")
    print(f"  Lefschetz number {lam} = chi(fixed set) {chi}")

# The disc rotation is the one corpus action that needs regularising: the
# solid triangle is mapped to itself setwise, and one barycentric
# subdivision exposes its center as the fixed point.
disc = disc_rotation()
reg = make_regular(disc)
print("disc rotation regularised:", reg.complex.f_vector, "fixed:",
      fixed_subcomplex(reg).f_vector)
print("Lefschetz number of the disc rotation:", lefschetz_number(disc))

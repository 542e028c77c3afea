"""Periodic free resolutions and stabilized Ext dimensions.

Run with ``python3 demos/04_homology.py``.
"""

from artifact.homology import (compositions_vanish, connecting_map_vanishing, ext_dims, ext_profile,
                               is_exact, obstruction_square, resolution_of)
from artifact.modules import free_module, realize, standard_module
from artifact.normal_forms import ExtMatrix

res = resolution_of("ideal", 3, 2)
print("Resolution of the point ideal (x, z) over C_2:")
for d in res.to_json()["differentials"]:
    print("  ", d)
print("  complex:", compositions_vanish(res), " exact at p = 6:", is_exact(res, 6))
for p in (5, 7):
    print(f"  Ext^0..1(I, I) at p = {p}:", ext_dims(res, realize(res.target_expr(), p), 1))

res = resolution_of("structure", 4, 2, 1)
N = standard_module("structure", {"i": 1}, 2, 5)
print("\nExt^i(O_C, O_C) over C_2: profiles", [c.to_json() for c in ext_profile(res, N, 2)])

res = resolution_of("torsion", 4, 2, 2)
print("Ext^i(T_2, O_2):", ext_dims(res, free_module(2, 5, 1), 3))
print("Connecting maps vanish for i = 1, 2, 3:", [connecting_map_vanishing(i) for i in (1, 2, 3)])

print("\nObstructions: a class deforms to first order only if its square vanishes.")
for rows in ([["0", "x"], ["0", "0"]], [["x", "0"], ["0", "0"]]):
    print(f"  {rows}: square zero = {obstruction_square(ExtMatrix.from_polys(rows, 5))}")

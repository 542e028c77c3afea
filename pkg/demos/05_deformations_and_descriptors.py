"""Deformations of quasi-free types and global descriptor arithmetic.

Run with ``python3 demos/05_deformations_and_descriptors.py``.
"""

from artifact.deform import char_order, deforms_to, type_poset, witness_family
from artifact.descriptors import (Rank3Datum, ideal_points_descriptor, locally_free_descriptor,
                                  rank3_analysis, rr_invariants)

P = type_poset(4, 2)
print("Quasi-free types of rank 4 on C_2, ordered by characteristic functions:")
print(P.to_dot())
for a, b in P.edges:
    w = witness_family(P.nodes[a], P.nodes[b])
    print(f"  {P.nodes[a].m} -> {P.nodes[b].m}: family valid {w.valid}, ranks {w.ranks}")

v = deforms_to((3, 0, 0), (1, 1, 0))
print(f"\nOn C_3, (3,0,0) -> (1,1,0): {bool(v)} [{v.provenance}], "
      f"order {char_order((3, 0, 0), (1, 1, 0)).value}")

print("\nRiemann-Roch on descriptors (genus 2, deg L = -1):")
for name, D in (("rank 1 bundle of degree 3 on C_3", locally_free_descriptor(3, 1, 3, 2, -1)),
                ("ideal of 2 points in C_3", ideal_points_descriptor(3, 2, -1, 2))):
    print(f"  {name}: gr {D.gr}, {rr_invariants(D, 2).to_json()}")

rep = rank3_analysis(Rank3Datum(1, 2, 1, 2), F_stable=True, G_stable=True)
print("\nRank 3 datum (eps, gamma, l, g) = (1, 2, 1, 2):", rep.to_json())

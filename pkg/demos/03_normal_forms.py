"""Torsion-free modules over C_2: Smith reduction and normal forms.

Run with ``python3 demos/03_normal_forms.py``.
"""

from artifact.modules import extension_expr, realize
from artifact.normal_forms import (ExtMatrix, TorsionFreeNF, classify_extension, classify_kernel,
                                   classify_torsion_free, dvr_smith, nf_invariants, nf_presentation,
                                   nf_realize, reflexivity_check)

A = ExtMatrix.from_polys([["x", "x^2"], ["x^2", "x^3"]], 6)
sm = dvr_smith(A)
print("Smith reduction over k[x]/(x^6) of [[x, x^2], [x^2, x^3]]:")
print(f"  valuations {sm.valuations}, zero rows {sm.zero_rows}, zero columns {sm.zero_cols}")
print("  as an extension of 2 O_C by 2 O_C the middle term is", classify_extension(2, 2, A))

print("\nThe same extension realized as a module and classified from its lattice:")
M = realize(extension_expr([["x", "x^2"], ["x^2", "x^3"]]), 6)
print("  ", classify_torsion_free(M))

nf = TorsionFreeNF((3, 1), 1, 1)
print(f"\nNormal form {nf}: invariants {nf_invariants(nf)}")
m, T, pi = nf_presentation(nf)
print(f"  as a kernel of {m} onto torsion of lengths {T}: {classify_kernel(m, T, pi).nf}")
N = nf_realize(nf, 6)
print(f"  realized at p = 6 (dim {N.dim}); reflexive: {reflexivity_check(N)}")

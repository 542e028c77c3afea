"""Quasi-free types, and kernels of surjections between quasi-free modules.

Run with ``python3 demos/02_quasi_free_types.py``.
"""

from artifact.filtrations import lemma_dims, quasi_free_type
from artifact.modules import Kernel, Morph, ideal_module, realize, standard_expr, sum_expr
from artifact.normal_forms import classify_torsion_free
from artifact.ring import Poly


def O(i, n):
    return standard_expr("structure", {"i": i}, n)


M = realize(sum_expr(O(3, 3), O(1, 3), O(1, 3)), 4)
print("2 O_1 + O_3 over C_3")
print("  dimension profile", lemma_dims(M), "-> type", quasi_free_type(M))

print("\nThe ideal (x, z) is not quasi-free:", quasi_free_type(ideal_module(2, 4, ["x", "z"])))

print("\nKernels of surjections onto O_1 over C_2 from O_2 + O_1:")
for label, b in (("(a, b) -> a + 3b", Poly.const(3)), ("(a, b) -> a + x b", Poly.mono(1, 0))):
    f = Morph(sum_expr(O(2, 2), O(1, 2)), O(1, 2), ((Poly.const(1), b),))
    K = realize(Kernel(f), 5)
    print(f"  {label}: type {quasi_free_type(K)}, normal form {classify_torsion_free(K)}")
print("With a constant coefficient the kernel is O_2. With coefficient x it is the")
print("point ideal (x, z), so quasi-freeness of kernels needs the map to be constant on fibres.")

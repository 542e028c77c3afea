"""Canonical filtrations, generalized rank and characteristic functions.

Run with ``python3 demos/01_filtrations_and_rank.py``.
"""

from artifact.filtrations import (char_function, first_filtration, generalized_rank,
                                  naive_min_generators, second_filtration, slope_rank)
from artifact.modules import Kernel, Morph, realize, standard_expr, standard_module
from artifact.ring import Poly


def show(name, M):
    first, second = first_filtration(M), second_filtration(M)
    print(f"{name}: dim {M.dim} at p = {M.p}")
    print(f"  first filtration chain  {first.chain}, graded {first.graded}")
    print(f"  second filtration chain {second.chain}")
    print(f"  R = {generalized_rank(M)} (slope rank {slope_rank(M)}), "
          f"F_first = {char_function(M, 'first').values}, "
          f"F_second = {char_function(M, 'second').values}")


print("Over C_2 the ideal of a point of length k is torsion free of rank 2.")
print("Its first graded piece carries torsion of length k; the second filtration does not see it.\n")
for k in (1, 2):
    show(f"I_{k}", standard_module("ideal_point", {"k": k}, 2, 6))

print("\nA structure sheaf O_i inside C_3 has rank i and no torsion.\n")
for i in (1, 2, 3):
    show(f"O_{i}", standard_module("structure", {"i": i}, 3, 5))

print("\nThe naive generator count is not additive, the generalized rank is.")
print("0 -> z O_3 -> O_3 -> O_1 -> 0 over C_3:")
big, small = standard_expr("structure", {"i": 3}, 3), standard_expr("structure", {"i": 1}, 3)
mods = [realize(e, 5) for e in (Kernel(Morph(big, small, ((Poly.const(1),),))), big, small)]
print("  generators", [naive_min_generators(M) for M in mods])
print("  ranks     ", [generalized_rank(M) for M in mods])

"""Local invariants of coherent sheaves on primitive multiple curves.

Modules over ``k[[x]][z]/(z^n)`` are handled through truncations at
x-precision ``p``; every invariant is confirmed at ``2p`` before it is reported.
"""

from .errors import ArtifactError, DefectError, PrecisionError, PreconditionError
from .field import Field
from .filtrations import (CharFunction, CxInvariants, QuasiFreeType, char_function,
                          first_filtration, generalized_rank, quasi_free_type,
                          second_filtration)
from .modules import (LocalModule, PresentationMatrix, direct_sum, free_module, ideal_module,
                      module_from_presentation, standard_module)
from .normal_forms import (ExtMatrix, TorsionFreeNF, classify_kernel, classify_torsion_free,
                           dvr_smith, nf_realize, reflexivity_check)

__all__ = [
    "ArtifactError", "DefectError", "PrecisionError", "PreconditionError", "Field",
    "CharFunction", "CxInvariants", "QuasiFreeType", "char_function", "first_filtration",
    "generalized_rank", "quasi_free_type", "second_filtration", "LocalModule",
    "PresentationMatrix", "direct_sum", "free_module", "ideal_module",
    "module_from_presentation", "standard_module", "ExtMatrix", "TorsionFreeNF",
    "classify_kernel", "classify_torsion_free", "dvr_smith", "nf_realize", "reflexivity_check",
]

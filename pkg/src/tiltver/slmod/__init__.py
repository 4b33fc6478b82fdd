"""Finite-dimensional SL2 modules over F_p given by divided-power generators."""

from .homs import (
    HomSpace,
    PresentationSequence,
    check_exact,
    coevaluation_space,
    end_space,
    evaluation_morphism,
    hom_space,
    is_split_epi,
    tensor_sequence,
)
from .module import (
    ModuleMap,
    WeightModule,
    cokernel,
    direct_sum,
    divided_power_action,
    dual,
    frobenius_twist,
    identity_map,
    kernel,
    leaf_permutation,
    natural_module,
    tensor,
    tensor_maps,
    tensor_power,
    trivial_module,
    zero_map,
    zero_module,
)
from .named import simple_module, steinberg, tilting_module
from .powers import sym2, sym_power, wedge2, wedge_power, wedge_presentation

__all__ = [
    "HomSpace", "ModuleMap", "PresentationSequence", "WeightModule", "check_exact",
    "coevaluation_space", "cokernel", "direct_sum", "divided_power_action", "dual",
    "end_space", "evaluation_morphism", "frobenius_twist", "hom_space", "identity_map",
    "is_split_epi", "kernel", "leaf_permutation", "natural_module", "simple_module",
    "steinberg", "sym2", "sym_power", "tensor", "tensor_maps", "tensor_power",
    "tensor_sequence", "tilting_module", "trivial_module", "wedge2", "wedge_power",
    "wedge_presentation", "zero_map", "zero_module",
]

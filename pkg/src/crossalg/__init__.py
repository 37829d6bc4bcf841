"""Crossed products of finite-dimensional algebras by finite groups, with exact homological tools."""

from .linalg import GF, QQ, Field, Subspace
from .algebra import FDAlgebra, radical, split_structure, corner_algebra, characterize_local_commutative
from .group import FiniteGroup, cyclic_group, symmetric_group, direct_product, sylow_subgroup
from .quiver import BoundQuiver, PathAlgebra, QuiverSymmetry, path_algebra, symmetry_to_automorphism
from .crossed import ParameterSet, CrossedProduct, build_crossed_product, validate_parameter_set
from .homology import FDModule, pd, gldim
from .complexes import PerfectComplex, minimalize, metrics, length
from .workspace import parse_inputs, Workspace

__all__ = [
    "GF",
    "QQ",
    "Field",
    "Subspace",
    "FDAlgebra",
    "radical",
    "split_structure",
    "corner_algebra",
    "characterize_local_commutative",
    "FiniteGroup",
    "cyclic_group",
    "symmetric_group",
    "direct_product",
    "sylow_subgroup",
    "BoundQuiver",
    "PathAlgebra",
    "QuiverSymmetry",
    "path_algebra",
    "symmetry_to_automorphism",
    "ParameterSet",
    "CrossedProduct",
    "build_crossed_product",
    "validate_parameter_set",
    "FDModule",
    "pd",
    "gldim",
    "PerfectComplex",
    "minimalize",
    "metrics",
    "length",
    "parse_inputs",
    "Workspace",
]

__version__ = "0.1.0"

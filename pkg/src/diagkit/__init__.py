"""diagkit: exact linear algebra over Q and the real algebraic numbers.

Subpackages:
  field      field tags, exact arithmetic, root isolation
  matrix     exact matrices, eigendata, diagonalizability decisions
  orthosvd   orthonormalization, orthogonal diagonalization, exact SVD
  subspaces  matrix-subspace algebra and the maximal-subspace normalizer
  preservers diagonalizability-preserver construction and classification
  cli        batch front-end (`diagkit` command)
"""

from .algebraic import AlgebraicReal, Comparison
from .field import FieldTag
from .matrix import Matrix, block_image_test, is_diagonalizable, simdiag
from .orthosvd import orth_diagonalize, svd
from .preservers import MatrixMap, classify, make_phi, make_psi, strong_classify
from .subspaces import (MatSubspace, min_intersection_report,
                        normalize_maximal, symmetrizability_obstruction)

__all__ = [
    "AlgebraicReal", "Comparison", "FieldTag", "Matrix", "MatSubspace",
    "MatrixMap", "block_image_test", "classify", "is_diagonalizable",
    "make_phi", "make_psi", "min_intersection_report", "normalize_maximal",
    "orth_diagonalize", "simdiag", "strong_classify", "svd",
    "symmetrizability_obstruction",
]
__version__ = "0.1.0"

"""Lower bounds on ||A^{-1}||_F for non-negative matrices: constructions of the
extremal S-matrices and Hadamard matrices, bound evaluation, audits of the
even-order structure lemmas, and a projected-gradient search for small
inverse norms."""

from .bounds import (BoundReport, ChainReport, DrnovsekTriple, EqualityClass, bound_report, build_fgh,
                     cauchy_schwarz_chain, cheng_even_bound, h_upper, h_value, proposition_ratio, sloane_constant)
from .constructions import (HadamardMatrix, SMatrix, is_hadamard, is_smatrix, paley_hadamard,
                            quadratic_residue_smatrix, smatrix_from_hadamard, sylvester_hadamard)
from .errors import (DimensionError, DomainError, IllConditionedError, InternalError, MatrixFormatError,
                     NotPrimeError, ResidueClassError, SingularError, SizeCapError, SMatrixError)
from .lemma_audit import (ContradictionLedger, IndexCertificate, PropAudit, RoundedPair, audit_prop,
                          contradiction_scan, extract_rounded_pair, find_good_indices)
from .matrix_core import (InversionResult, finite_diff_gradient, frobenius_inner, frobenius_norm, invert,
                          max_norm, parse_matrix, read_matrix, write_matrix)
from .optimizer import (OptimizerConfig, OptimizerRun, binary_oracle, objective_and_gradient,
                        projected_gradient_minimize)

__version__ = "0.1.0"

"""Six-vertex model laboratory at roots of unity.

Builds the fusion hierarchy and the parameterized auxiliary (Q)
operators as exact traces over small quantum-group modules, certifies
the functional identities relating them numerically, reconstructs the
polynomial eigenvalues of Q with their zero structure, and solves the
resulting quadratic (Wronskian-type) and Bethe systems.
"""

from .roots import (RootOfUnity, EvalRep, BorelRep, make_root_of_unity,
                    eval_rep, borel_rep, q_integer)
from .vertex import (LocalVertex, SectorOperator, SymmetryOps, build_R_fused,
                     build_L, trace_monodromy, dense_monodromy, fusion_matrix,
                     transfer_matrix, aux_matrix, symmetry_ops,
                     partition_function, sector_basis, weight_from_sz,
                     commutator, rel_residual)
from .identities import (IdentityReport, IDENTITY_IDS, check_identity,
                         fusion_from_Q)
from .spectra import (EigenFamily, QPolynomial, joint_eigenbasis,
                      build_eigen_family, polynomial_eigenvalues,
                      extract_and_classify_zeroes, sector_spectrum,
                      detect_strings, expected_constant_term)
from .bethe import (BetheSolution, elementary_symmetric, wronskian_residual,
                    solve_wronskian_system, bethe_certify,
                    solution_from_zeroes, sector_bethe)
from .intertwiners import (IntertwinerMatrix, build_intertwiner,
                           check_intertwining, check_ybe_and_qcomm,
                           solve_intertwiner_numeric, ybe_lambda)
from .errors import (PrimitivityError, SizeError, FamilyError,
                     ReconstructionError, PoleError, BranchError,
                     SingularSampleError)

__version__ = "0.1.0"

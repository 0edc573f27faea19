"""
Eigencurves of the two-parameter symmetric eigenproblem

    A x = lam B x + mu M x

with A and M positive definite and B of any sign.  For each real ``lam``
the values ``mu_1(lam) <= ... <= mu_n(lam)`` are the eigenvalues of the
pencil ``(A - lam B, M)``; the package traces these curves, analyses their
crossings, slopes and straight pieces, and counts the components of their
superlevel sets.
"""

from .analysis import (asymptotics, detect_lines, eigenpoint, independence_check,
                       level_crossings, orthogonality_residual)
from .curves import LambdaGrid, lipschitz_bound, trace
from .curves import slice as spectrum_slice
from .errors import (AsymmetricInput, DependentBasis, EigencurveError, GridTooNarrow,
                     InvalidCoefficient, LevelTooCloseToSpectrum, NoConvergence,
                     NotAnEigenpoint, NotPositiveDefinite)
from .forms import FormTriple, coercivity_shift, validate
from .geometry import LineSpec, components, transform_line, verify_counting
from .pencil import cholesky, restricted_pencil, solve_pencil
from .problems import (RobinSteklovSpec1D, SturmLiouvilleSpec, SyntheticSpec,
                       paper_matrix_example, random_triple, richardson,
                       robin_steklov_1d, sturm_liouville, synthetic, two_line_crossing)

__version__ = "0.1.0"

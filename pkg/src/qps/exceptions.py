"""Exception hierarchy.

Every error raised on purpose by the package derives from :class:`QPSError`.
Subclasses carry an ``identity`` string naming the relation that was found
violated; the command line uses it for its one-line diagnostics.
"""


class QPSError(Exception):
    identity = "qps"


class InvalidDimensionError(QPSError, ValueError):
    identity = "dimension must be a positive integer"


class DimensionMismatchError(QPSError, ValueError):
    identity = "operator dimensions must agree"


class NotUnimodularError(QPSError, ValueError):
    identity = "det h = 1 (Sp(2,Z) membership)"


class NotCoprimeError(QPSError, ValueError):
    identity = "gcd(kappa, lambda) = 1 (Bezout completion)"


class PointOutOfRangeError(QPSError, ValueError):
    identity = "doubled coordinates lie in [0, 2N)"


class RepresentationError(QPSError):
    identity = "unique intertwiner for the transformation rule of Q and P"


class NumericalError(QPSError):
    identity = "unitarity of the representation operator"


class ProjectivityError(QPSError):
    identity = "projective composition law U_h' U_h = exp(i phi) U_h'h"


class AdmissibilityError(QPSError, ValueError):
    identity = "phase class n+ = n- = 0 or N/2 (mod N) required for marginality"


class StateError(QPSError, ValueError):
    identity = "density matrix is Hermitian, unit-trace, positive"


class StateFormatError(QPSError, ValueError):
    identity = "state document schema"

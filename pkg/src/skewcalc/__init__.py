"""skewcalc: exact computations with graded algebras given by generators and relations."""

__version__ = "0.1.0"

from .scalars import ParamRing, ParamScalar  # noqa: E402
from .ncpoly import Alphabet, NcPoly, RewriteSystem, complete  # noqa: E402
from .algebras import GradedMap, Presentation  # noqa: E402

__all__ = ["ParamRing", "ParamScalar", "Alphabet", "NcPoly", "RewriteSystem", "complete",
           "GradedMap", "Presentation", "__version__"]

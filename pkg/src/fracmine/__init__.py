"""fracmine: mine closed forms for parameterized continued fractions and series."""

from .precision import PrecisionContext, WORKING_DEFAULT, DETECTION_DEFAULT

__version__ = "0.1.0"

__all__ = ["PrecisionContext", "WORKING_DEFAULT", "DETECTION_DEFAULT", "__version__"]

"""Exact rank computations for planar webs given by rational first integrals."""

__version__ = "0.1.0"

from .classify import RankReport, Verdict
from .ratfield import RatFunc
from .webcalc import WebDef, WebFrame, frame

__all__ = ["RankReport", "Verdict", "RatFunc", "WebDef", "WebFrame", "frame", "__version__"]

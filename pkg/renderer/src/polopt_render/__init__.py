"""Static figure rendering for the polopt CLI's JSON outputs.

The renderer is a deliberately thin companion: it reads the versioned
JSON documents the analysis CLI writes, draws one of four figure kinds,
and saves a static image.  It computes no statistics of its own.
"""

from .errors import EmptyInput, RenderError, SchemaMismatch
from .figures import FIGURE_KINDS, render

__version__ = "0.1.0"

__all__ = ["render", "FIGURE_KINDS", "RenderError", "SchemaMismatch", "EmptyInput"]

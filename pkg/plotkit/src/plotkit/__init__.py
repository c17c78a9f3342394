"""plotkit: figure rendering for daqsim CSV outputs."""

__version__ = "0.1.0"

from .render import FIGURE_KINDS, PlotError, PlotSpec, render

__all__ = ["FIGURE_KINDS", "PlotError", "PlotSpec", "render", "__version__"]

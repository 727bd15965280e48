"""Census of dipyramid face pairings that are candidate hyperbolic Mom-n manifolds."""

__version__ = "0.1.0"

from .polyhedra import DipyramidSpec, pyramid_sets_for_mom  # noqa: E402
from .kernels import IMPLEMENTATION  # noqa: E402

__all__ = ["DipyramidSpec", "pyramid_sets_for_mom", "IMPLEMENTATION", "__version__"]

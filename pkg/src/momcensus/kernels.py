"""Kernel selection.

The compiled extension ``_ckernels`` is used when it imports; otherwise, or
when ``MOMCENSUS_PURE_PYTHON=1`` is set, the pure-Python ``_pykernels``
takes over.  Both expose the same ``Kernel`` class:

``has_smaller_conjugate(p)``
    True when some symmetry conjugates ``p`` to a lexicographically smaller
    pairing.  ``p`` may be partial (-1 marks an unpaired face); a True answer
    then holds for every completion.
``filter_pairing(p)``
    ``(code, bad_vertex, vertex_classes, edge_classes, reversed_edges)``.
``diagnose(p)``
    ``(polar_ok, chi_ok, orient_ok)`` with every check run.
``search(prefix, resume, node_limit, use_filter, diagnostics=False)``
    Orderly enumeration below a shard prefix; see ``_pykernels.search``.
"""
from __future__ import annotations

import functools
import os

from .polyhedra import ROTATIONAL, DipyramidSpec
from .tables import kernel_tables

if os.environ.get("MOMCENSUS_PURE_PYTHON", "") not in ("", "0"):
    from . import _pykernels as _impl
else:
    try:
        from . import _ckernels as _impl
    except ImportError:  # pragma: no cover - depends on the build
        from . import _pykernels as _impl

from . import _pykernels

IMPLEMENTATION: str = _impl.IMPLEMENTATION
Kernel = _impl.Kernel
PyKernel = _pykernels.Kernel

PASSED = _pykernels.PASSED
NOT_INVOLUTION = _pykernels.NOT_INVOLUTION
POLAR_SPLIT = _pykernels.POLAR_SPLIT
NONTORUS = _pykernels.NONTORUS
NONORIENTABLE = _pykernels.NONORIENTABLE

REASONS = {
    PASSED: "passed",
    NOT_INVOLUTION: "not_involution",
    POLAR_SPLIT: "polar_class_split",
    NONTORUS: "nontorus_link",
    NONORIENTABLE: "nonorientable_link",
}


@functools.lru_cache(maxsize=64)
def get_kernel(spec: DipyramidSpec, mode: str = ROTATIONAL, pure: bool = False):
    """Cached kernel for ``spec``; ``pure`` forces the Python implementation."""
    tables = kernel_tables(spec, mode)
    if pure or spec.num_faces > 64:
        return PyKernel(tables)
    return Kernel(tables)

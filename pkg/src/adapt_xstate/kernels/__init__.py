"""Kernel backend selection.

The compiled extension (``_core``, Cython) is preferred when importable;
otherwise the numpy fallback is used.  ``ADAPT_XSTATE_KERNELS=py`` forces
the fallback, ``=cy`` demands the extension (ImportError if missing).
"""

import os

_choice = os.environ.get("ADAPT_XSTATE_KERNELS", "auto")
if _choice not in ("auto", "cy", "py"):
    raise ValueError(
        f"ADAPT_XSTATE_KERNELS must be auto, cy or py, got {_choice!r}"
    )

impl = None
if _choice in ("auto", "cy"):
    try:
        from . import _core as impl  # type: ignore[no-redef]
    except ImportError:
        if _choice == "cy":
            raise
if impl is None:
    from . import _fallback as impl  # type: ignore[no-redef]

BACKEND = impl.BACKEND
rotate_single = impl.rotate_single
rotate_double = impl.rotate_double
generator_single = impl.generator_single
generator_double = impl.generator_double
group_phase_vector = impl.group_phase_vector
observable_matvec = impl.observable_matvec
observable_expectation = impl.observable_expectation

__all__ = [
    "BACKEND",
    "rotate_single",
    "rotate_double",
    "generator_single",
    "generator_double",
    "group_phase_vector",
    "observable_matvec",
    "observable_expectation",
]

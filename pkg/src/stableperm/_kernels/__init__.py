"""Kernel dispatch: compiled extension when available, reference lane otherwise.

Set STABLEPERM_PURE=1 to force the pure lane (useful for benchmarking and for
verifying that both lanes agree bit-for-bit).
"""
import os

from . import _ref

POLICY_LIFO = _ref.POLICY_LIFO
POLICY_FIFO = _ref.POLICY_FIFO
POLICY_RANDOM = _ref.POLICY_RANDOM

if os.environ.get("STABLEPERM_PURE"):
    _impl = _ref
    backend = "pure"
else:
    try:
        from . import _fast as _impl  # type: ignore[attr-defined]

        backend = "compiled"
    except ImportError:
        _impl = _ref
        backend = "pure"

run_proposals_kernel = _impl.run_proposals_kernel
stable_mask_kernel = _impl.stable_mask_kernel

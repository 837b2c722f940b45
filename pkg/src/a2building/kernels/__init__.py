"""Kernel selection: compiled extension when available, pure Python otherwise.

Set A2BUILDING_KERNEL=pure to force the fallback.  Both backends implement
identical exact algorithms, so every result is bit-identical either way.
"""

import os

from . import pure

_impl = pure
if os.environ.get("A2BUILDING_KERNEL", "").lower() != "pure":
    try:
        from . import _speed  # type: ignore[attr-defined]

        _impl = _speed
    except ImportError:
        pass

BACKEND_NAME = _impl.BACKEND_NAME

vp_int = _impl.vp_int
mat_mul_int = _impl.mat_mul_int
mat_vec_int = _impl.mat_vec_int
adj_det_int = _impl.adj_det_int
charpoly3_int = _impl.charpoly3_int
minor_val_profile = _impl.minor_val_profile
hnf_int = _impl.hnf_int
smith_transform_int = _impl.smith_transform_int


def backend():
    """Name of the active kernel backend ("speed" or "pure")."""
    return BACKEND_NAME


def implementations():
    """All importable backends, keyed by name (for tests and benchmarks)."""
    impls = {"pure": pure}
    try:
        from . import _speed  # type: ignore[attr-defined]

        impls["speed"] = _speed
    except ImportError:
        pass
    return impls

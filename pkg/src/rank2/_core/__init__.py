"""Kernel selection: compiled Cython extension with a pure-numpy fallback.

Set ``RANK2_PURE=1`` to force the fallback (used by the benchmark and CI).
"""

import os

if os.environ.get("RANK2_PURE") == "1":
    from . import fallback as _impl
else:
    try:
        from . import kernels as _impl  # type: ignore[attr-defined]
    except ImportError:
        from . import fallback as _impl

COMPILED = _impl.COMPILED
collect_gen_table = _impl.collect_gen_table
closure = _impl.closure
image_tables = _impl.image_tables
hom_filter = _impl.hom_filter

"""Backend dispatch for the hot kernels.

The compiled extension is used when importable; set PIGEONSTATS_PURE=1 to
force the pure numpy fallback (used by the benchmark and the agreement tests).
"""
from __future__ import annotations

import os

from . import _pure

if os.environ.get("PIGEONSTATS_PURE", "") not in ("", "0"):
    _impl = _pure
    BACKEND = "pure"
else:
    try:
        from . import _ext as _impl  # type: ignore[no-redef]

        BACKEND = "ext"
    except ImportError:
        _impl = _pure
        BACKEND = "pure"

DEFAULT_CAP = _pure.DEFAULT_CAP

cone_range_counts = _impl.cone_range_counts
approx_counts = _impl.approx_counts
rect_counts = _impl.rect_counts
near_edge_counts = _impl.near_edge_counts
powq_bucket_counts = _impl.powq_bucket_counts
floatpow_bucket_counts = _impl.floatpow_bucket_counts
range_bucket_counts = _impl.range_bucket_counts
hit_buckets = _impl.hit_buckets
ns_hitting_bucket = _impl.ns_hitting_bucket

# Pure helpers that are not performance critical but share semantics.
# The float-pow process helpers serve general exponents only, a cold path,
# so they have no compiled twin.
reduce_rows = _pure.reduce_rows
floatpow_ns_hitting_bucket = _pure.floatpow_ns_hitting_bucket
floatpow_hit_buckets = _pure.floatpow_hit_buckets

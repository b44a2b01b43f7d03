"""Backend selection: compiled kernel core if available, NumPy otherwise.

Set ``WCEGO_BACKEND=numpy`` to force the fallback (used by the benchmark
and by tests that compare the two implementations).
"""

import os

from . import _gram_np

try:
    from . import _gram_cy
except ImportError:  # extension not built
    _gram_cy = None

if os.environ.get("WCEGO_BACKEND", "").lower() == "numpy" or _gram_cy is None:
    impl = _gram_np
else:
    impl = _gram_cy

BACKEND_NAME = impl.BACKEND_NAME


def available_backends():
    out = {"numpy": _gram_np}
    if _gram_cy is not None:
        out["cython"] = _gram_cy
    return out

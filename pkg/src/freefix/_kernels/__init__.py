"""Hot word kernels, compiled when available.

The Cython extension is preferred; set ``FREEFIX_KERNELS=python`` to force
the pure-Python implementation. ``BACKEND`` names the active one.
"""

import os

from . import _pykernels

python_kernels = _pykernels

try:
    from . import _ckernels as compiled_kernels
except ImportError:  # extension not built
    compiled_kernels = None

if compiled_kernels is not None and os.environ.get("FREEFIX_KERNELS", "").lower() != "python":
    _active = compiled_kernels
    BACKEND = "cython"
else:
    _active = _pykernels
    BACKEND = "python"

reduce_word = _active.reduce_word
apply_images = _active.apply_images
trace = _active.trace
fixed_words = _active.fixed_words

__all__ = ["BACKEND", "reduce_word", "apply_images", "trace", "fixed_words",
           "python_kernels", "compiled_kernels"]

"""Build script: compiles the optional Cython kernel-matrix core.

The package works without the extension (a NumPy fallback is selected at
import time), so a failed extension build degrades gracefully to a
pure-Python install.
"""

import sys

from setuptools import setup

ext_modules = []
try:
    import numpy as np
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/wcego/_gram_cy.pyx"],
        compiler_directives={"language_level": "3"},
    )
    include_dirs = [np.get_include()]
except Exception as exc:  # pragma: no cover - build-env dependent
    print(f"wcego: skipping Cython extension ({exc!r}); "
          "the NumPy fallback will be used", file=sys.stderr)
    include_dirs = []

setup(ext_modules=ext_modules, include_dirs=include_dirs)

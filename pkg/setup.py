"""Build script: compiles the optional Cython kernel extension.

The package is fully functional without the extension (a pure-Python
reference backend is selected at import time), so a failed compile is
downgraded to a warning rather than aborting the install.
"""

import warnings

from setuptools import Extension, setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "gamesync._kernels._speedups",
                sources=["src/gamesync/_kernels/_speedups.pyx"],
                optional=True,
            )
        ],
        language_level="3",
    )
except Exception as exc:  # pragma: no cover - build environment dependent
    warnings.warn(f"Cython unavailable, building pure-Python only: {exc}")

setup(ext_modules=ext_modules)

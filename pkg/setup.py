import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("NCOVER_SKIP_EXT") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [Extension("ncover._core", ["src/ncover/_core.pyx"])],
            compiler_directives={
                "language_level": "3",
                "boundscheck": False,
                "wraparound": False,
                "cdivision": True,
                "initializedcheck": False,
            },
        )
    except ImportError:
        # No Cython: fall back to the pure-Python kernels at import time.
        ext_modules = []

setup(ext_modules=ext_modules)

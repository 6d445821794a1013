"""Build script: compiles the batched-walker extension when Cython is available.

The package works without the extension (a numpy fallback is selected at
import time), so a missing compiler degrades speed, not correctness.
"""

from setuptools import Extension, setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [Extension("ppwalk._walkers", ["src/ppwalk/_walkers.pyx"])],
        language_level=3,
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)

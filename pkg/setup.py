"""Builds the optional compiled tree-edit-distance kernel.

If Cython (or a C compiler) is unavailable the build still succeeds and the
package falls back to the pure-Python kernel at import time.
"""

from setuptools import setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/proofsynth/_kernels/ted_cy.pyx"],
        language_level=3,
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)

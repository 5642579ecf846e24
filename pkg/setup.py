"""Build hook for the optional compiled kernels.

The extension is marked optional: if no C compiler (or Cython) is available
the install still succeeds and the package falls back to the pure-numpy
kernels at import time.
"""

from setuptools import Extension, setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext = Extension(
        "hubbardll._kernels._speed",
        sources=["src/hubbardll/_kernels/_speed.pyx"],
        optional=True,
    )
    ext_modules = cythonize([ext], language_level="3")
except ImportError:
    pass

setup(ext_modules=ext_modules)

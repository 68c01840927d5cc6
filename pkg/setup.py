"""Build script for the optional compiled kernels.

The package works without the extension (a pure-Python/numpy lane is selected
at import time), so a missing compiler or Cython only costs speed.
"""
from setuptools import Extension, setup

try:
    import numpy
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "stableperm._kernels._fast",
                sources=["src/stableperm/_kernels/_fast.pyx"],
                include_dirs=[numpy.get_include()],
                extra_compile_args=["-O3"],
            )
        ],
        language_level=3,
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)

"""Build script: compiles the optional fast kernel extension.

The package works without the extension (a pure-Python kernel is selected at
import time), so a failed compile only costs speed. Set SPINORBIT_NO_EXT=1 to
skip the extension build entirely.
"""

import os

from setuptools import setup

_PYX = "src/spinorbit/kernels/_fast.pyx"

ext_modules = []
if not os.environ.get("SPINORBIT_NO_EXT") and os.path.exists(_PYX):
    try:
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [
                Extension(
                    "spinorbit.kernels._fast",
                    [_PYX],
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        pass

setup(ext_modules=ext_modules)

"""Build script: compiles the optional native selection-probability kernel.

The package is fully functional without the extension (a pure-Python
kernel is selected at import time), so any failure here degrades to a
warning instead of aborting the install. Set LEXISCAPE_SKIP_NATIVE=1 to
skip the compile step entirely.
"""

import os
import warnings

from setuptools import setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    def run(self):
        try:
            super().run()
        except Exception as exc:  # missing compiler, broken toolchain, ...
            warnings.warn(f"native kernel build failed, using pure-Python fallback: {exc}")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            warnings.warn(f"native kernel build failed, using pure-Python fallback: {exc}")


ext_modules = []
if not os.environ.get("LEXISCAPE_SKIP_NATIVE"):
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            ["src/lexiscape/kernels/_plex_native.pyx"],
            language_level=3,
        )
    except ImportError:
        warnings.warn("Cython not available, building without the native kernel")

setup(ext_modules=ext_modules, cmdclass={"build_ext": OptionalBuildExt})

"""Build script.

The package works as pure Python + numpy.  If Cython and a C compiler are
available, a compiled kernel module (qpad._kernels._core) is built as well;
the package picks it up at import time.  Set QPAD_PURE_PYTHON=1 to skip the
extension entirely.
"""

import os

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    """Build the extension if possible, fall back to pure Python if not."""

    def run(self):
        try:
            super().run()
        except Exception as exc:
            print(f"warning: compiled kernels skipped ({exc}); using the numpy fallback")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"warning: building {ext.name} failed ({exc}); using the numpy fallback")


ext_modules = []
if os.environ.get("QPAD_PURE_PYTHON") != "1":
    try:
        from Cython.Build import cythonize
    except ImportError:
        print("warning: Cython not found; installing without compiled kernels")
    else:
        ext_modules = cythonize(
            [Extension("qpad._kernels._core", ["src/qpad/_kernels/_core.pyx"])],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules, cmdclass={"build_ext": optional_build_ext})

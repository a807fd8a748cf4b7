"""Build script: compiles the optional quad-index kernel extension.

The package is fully functional without the extension (a pure-Python
kernel is selected at import time), so any build failure here downgrades
to a warning instead of aborting the install.
"""

import sys

from setuptools import setup
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler missing, etc.
            print(f"warning: native kernel not built ({exc}); "
                  "falling back to pure-Python kernel", file=sys.stderr)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"warning: skipping {ext.name}: {exc}", file=sys.stderr)


ext_modules = []
try:
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [Extension("semwiki._kernel._native",
                   ["src/semwiki/_kernel/_native.pyx"])],
        language_level=3,
    )
except ImportError:
    print("warning: Cython not available; building without native kernel",
          file=sys.stderr)

setup(
    ext_modules=ext_modules,
    cmdclass={"build_ext": optional_build_ext},
)

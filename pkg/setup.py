"""Build script: compiles the optional factorization-search extension.

The package is fully functional without the extension; hurwitz falls back
to the pure-Python kernel when the compiled module is absent.  Set
CONEANGLES_PURE=1 to skip compilation entirely.
"""

import os
import sys

from setuptools import setup
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    """build_ext that downgrades compiler failures to a warning."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # noqa: BLE001 - any build failure is non-fatal
            self._warn(exc)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:  # noqa: BLE001
            self._warn(exc)

    @staticmethod
    def _warn(exc):
        print(
            "WARNING: building the compiled search kernel failed (%s); "
            "falling back to the pure-Python kernel." % exc,
            file=sys.stderr,
        )


ext_modules = []
if not os.environ.get("CONEANGLES_PURE"):
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            ["src/coneangles/_factorsearch.pyx"],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        print("WARNING: Cython not available; skipping compiled kernel.", file=sys.stderr)

setup(
    ext_modules=ext_modules,
    cmdclass={"build_ext": optional_build_ext},
)

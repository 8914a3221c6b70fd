"""Build hook for the optional compiled kernel.

The package runs on the pure-Python kernel alone; this only tries to compile
the Cython twin and shrugs off any failure (no Cython, no C compiler) so the
install never breaks on a machine without a toolchain.
"""

import sys

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    def run(self):
        try:
            super().run()
        except Exception as exc:
            self._skip(exc)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            self._skip(exc)

    def _skip(self, exc):
        print(
            "compiled kernel skipped (%s); falling back to the pure-Python "
            "kernel" % exc,
            file=sys.stderr,
        )


try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "equimap._kernel._cykernel",
                ["src/equimap/_kernel/_cykernel.pyx"],
            )
        ],
        language_level="3",
    )
except ImportError:
    ext_modules = []

setup(cmdclass={"build_ext": OptionalBuildExt}, ext_modules=ext_modules)

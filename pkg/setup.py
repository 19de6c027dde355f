"""Build script for the optional native core.

The ``basketq._core`` extension holds the seq-cst atomics and the nogil
LL/IC benchmark kernels. When Cython or a C compiler is missing the
package still installs and runs on the pure-Python fallback.
"""

import sys

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext

DIRECTIVES = {
    "language_level": "3",
    "boundscheck": False,
    "wraparound": False,
    "cdivision": True,
}


class optional_build_ext(build_ext):
    def run(self):
        try:
            super().run()
        except Exception as exc:  # noqa: BLE001
            print(f"warning: native core not built ({exc}); using pure Python", file=sys.stderr)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:  # noqa: BLE001
            print(f"warning: failed to build {ext.name} ({exc})", file=sys.stderr)


try:
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(
        [Extension("basketq._core", ["src/basketq/_core.pyx"], extra_compile_args=["-O2"])],
        compiler_directives=DIRECTIVES,
    )

setup(ext_modules=ext_modules, cmdclass={"build_ext": optional_build_ext})

"""Build script: compiles the optional MPFR-backed kernels.

The compiled extension is an accelerator only.  If Cython or the MPFR/GMP
headers are unavailable, or compilation fails for any other reason, the
package installs without it and tcasym falls back to the pure-Python
kernels at import time (see tcasym._accel).  Set TCASYM_NO_EXT=1 to skip
the extension build deliberately.
"""

import os

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    """build_ext that downgrades compilation failures to a warning."""

    def run(self):
        try:
            super().run()
        except Exception as exc:
            print(f"tcasym: compiled kernels skipped ({exc}); using pure-Python fallback")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"tcasym: building {ext.name} failed ({exc}); using pure-Python fallback")


def make_extensions():
    if os.environ.get("TCASYM_NO_EXT") == "1":
        return []
    try:
        from Cython.Build import cythonize
    except ImportError:
        print("tcasym: Cython not available; compiled kernels skipped")
        return []
    ext = Extension(
        "tcasym._kernels",
        ["src/tcasym/_kernels.pyx"],
        libraries=["mpfr", "gmp"],
        extra_compile_args=["-O2"],
    )
    return cythonize([ext], language_level=3)


setup(
    ext_modules=make_extensions(),
    cmdclass={"build_ext": optional_build_ext},
)

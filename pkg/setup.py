"""Build script for the optional compiled kernel.

The package works without the extension (a numpy fallback is selected at
import time), so a failed compile downgrades to a warning instead of
aborting the install.
"""

import warnings

from setuptools import setup
from setuptools.command.build_ext import build_ext
from setuptools.extension import Extension


class optional_build_ext(build_ext):
    def run(self):
        try:
            super().run()
        except Exception as exc:  # missing compiler, broken toolchain, ...
            warnings.warn(f"compiled kernel skipped ({exc}); numpy fallback will be used")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            warnings.warn(f"compiled kernel skipped ({exc}); numpy fallback will be used")


def _extensions():
    try:
        import numpy
        from Cython.Build import cythonize
    except ImportError:
        return []
    return cythonize(
        [
            Extension(
                "cone_kkt._kernels._core",
                ["src/cone_kkt/_kernels/_core.pyx"],
                include_dirs=[numpy.get_include()],
            )
        ],
        compiler_directives={"language_level": 3},
    )


setup(ext_modules=_extensions(), cmdclass={"build_ext": optional_build_ext})

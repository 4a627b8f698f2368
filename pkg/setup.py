"""Build hook for the optional compiled kernel.

The package is fully functional without it (pure-Python fallback); set
JONQ_NO_EXT=1 or build without Cython/a C compiler to skip the extension.
"""

import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("JONQ_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [
                Extension(
                    "jonq._speedups",
                    ["src/jonq/_speedups.pyx"],
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)

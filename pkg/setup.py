"""Builds the optional compiled dice-resolution kernel.

The package is fully functional without it; `perihack.kernels` falls back to
the pure-Python implementation when the extension is missing.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "perihack._resolution",
                ["src/perihack/_resolution.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)

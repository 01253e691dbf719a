"""Build script for the optional compiled relaxation kernels.

The package works without the extension (a pure-Python twin of every kernel
ships in hodgegen._pykernels); the extension only makes the harmonic sweeps
fast.  Floating-point contraction is disabled so the compiled kernels produce
bit-identical results to the pure-Python ones.
"""

from setuptools import Extension, setup

try:
    import numpy
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

ext_modules = []
if cythonize is not None:
    ext_modules = cythonize(
        [
            Extension(
                "hodgegen._cykernels",
                ["src/hodgegen/_cykernels.pyx"],
                include_dirs=[numpy.get_include()],
                extra_compile_args=["-O3", "-ffp-contract=off"],
            )
        ],
        compiler_directives={
            "language_level": "3",
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    )

setup(ext_modules=ext_modules)

"""Build script for the optional compiled sweep kernels.

The package is pure Python except for conelab._kernels._lift, a small Cython
module with the inner loops of the monotone local-solve iteration.  If Cython
or a C compiler is unavailable the extension is skipped and the package falls
back to the pure-Python kernels at import time.
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
                "conelab._kernels._lift",
                ["src/conelab/_kernels/_lift.pyx"],
                extra_compile_args=["-O3"],
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

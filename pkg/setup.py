"""Build script for the optional compiled kernels.

The package is fully functional without the extension (a numpy fallback is
selected at import time); the extension only accelerates the batch
evaluation kernels used by the benchmark harness and the trainer.

``-ffp-contract=off`` keeps the compiled kernels bitwise-comparable with
the scalar reference implementation (no FMA contraction).
"""

import sys

from setuptools import Extension, setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "taaf._kernels",
                ["src/taaf/_kernels.pyx"],
                extra_compile_args=["-O3", "-ffp-contract=off"],
                optional=True,
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    sys.stderr.write("Cython unavailable: installing without compiled kernels\n")

setup(ext_modules=ext_modules)

"""Build hook: compile the optional Cython kernel when a toolchain is present.

The package is fully functional without it -- ``ottospin._kernels`` falls back
to a vectorized numpy implementation at import time.
"""

from setuptools import Extension, setup

extensions = []
try:
    from Cython.Build import cythonize

    extensions = cythonize(
        [
            Extension(
                "ottospin._kernels._core",
                ["src/ottospin/_kernels/_core.pyx"],
                optional=True,
            )
        ],
        language_level=3,
    )
except ImportError:
    pass

setup(ext_modules=extensions)

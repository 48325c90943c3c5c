"""Build script: compiles the optional native refinement kernel.

The package is fully functional without the extension; solviso._kernels
falls back to the numpy implementation when the import fails.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
    import numpy

    ext_modules = cythonize(
        [
            Extension(
                "solviso._refine",
                ["src/solviso/_refine.pyx"],
                include_dirs=[numpy.get_include()],
            )
        ],
        language_level=3,
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)

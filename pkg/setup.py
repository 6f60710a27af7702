"""Build script for the optional compiled kernel.

The package is pure Python plus one Cython extension for the quadratic
benchmark inner loop.  If Cython or a C compiler is unavailable the build
falls back to the numpy kernel, so the extension failing to compile is not
fatal to installation.
"""

from setuptools import Extension, setup


def extensions():
    try:
        import numpy as np
        from Cython.Build import cythonize
    except ImportError:
        return []
    ext = Extension(
        "qtgrad._quadkernel",
        ["src/qtgrad/_quadkernel.pyx"],
        include_dirs=[np.get_include()],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
    )
    return cythonize([ext], compiler_directives={"language_level": "3"})


setup(ext_modules=extensions())

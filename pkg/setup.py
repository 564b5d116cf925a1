"""Build script: compiles the optional LU hot kernel.

The package works without the extension (a numpy fallback implementing the
same arithmetic is selected at import time), so the build is marked optional
and a missing compiler or Cython only costs speed, never correctness.
"""

from setuptools import Extension, setup

ext_modules = []
try:
    import numpy
    from Cython.Build import cythonize

    ext = Extension(
        "hyperlines._kernels",
        ["src/hyperlines/_kernels.pyx"],
        include_dirs=[numpy.get_include()],
        # -ffp-contract=off: the numpy fallback must reproduce this kernel
        # bit for bit, so fused multiply-adds are disabled.
        extra_compile_args=["-O3", "-ffp-contract=off"],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
        optional=True,
    )
    ext_modules = cythonize([ext], compiler_directives={"language_level": "3"})
except ImportError:
    pass

setup(ext_modules=ext_modules)

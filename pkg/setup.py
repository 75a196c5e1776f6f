import os

from setuptools import Extension, setup

# The compiled kernel core is optional: the package falls back to the
# numpy kernels when the extension is missing or fails to build.
ext_modules = []
if os.environ.get("EFFODE_NO_EXT") != "1":
    try:
        import numpy
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [
                Extension(
                    "effode.kernels._core",
                    ["src/effode/kernels/_core.pyx"],
                    include_dirs=[numpy.get_include()],
                    define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                    extra_compile_args=["-O3"],
                    optional=True,
                )
            ],
            language_level=3,
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)

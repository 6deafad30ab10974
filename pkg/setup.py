import os

from setuptools import Extension, setup

# The compiled kernels are optional: the package falls back to the pure
# Python implementations in rmdseq._kernels_py when the extension is absent
# (see rmdseq.engine).  Set RMDSEQ_NO_EXT=1 to skip building it.
ext_modules = []
if not os.environ.get("RMDSEQ_NO_EXT"):
    try:
        from Cython.Build import cythonize
    except ImportError:
        pass
    else:
        ext_modules = cythonize(
            [
                Extension(
                    "rmdseq._kernels_c",
                    ["src/rmdseq/_kernels_c.pyx"],
                    extra_compile_args=["-O3"],
                )
            ],
            language_level=3,
        )

setup(ext_modules=ext_modules)

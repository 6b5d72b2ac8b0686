import numpy as np
from setuptools import setup
from setuptools.extension import Extension

try:
    from Cython.Build import cythonize

    extensions = cythonize(
        [
            Extension(
                "cohortdrift.kernels._ckernels",
                ["src/cohortdrift/kernels/_ckernels.pyx"],
                include_dirs=[np.get_include()],
            )
        ],
        language_level=3,
    )
except ImportError:
    # Pure-python fallback is selected at import time, so a missing
    # compiler or Cython is not fatal.
    extensions = []

setup(ext_modules=extensions)

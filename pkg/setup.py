"""Build the optional compiled kernel core.

If Cython or a C compiler is unavailable the package still installs and
falls back to the numpy implementation at import time.
"""
import numpy as np
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:  # pragma: no cover - build without the extension
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "wkp._ckernels",
                ["src/wkp/_ckernels.pyx"],
                include_dirs=[np.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)

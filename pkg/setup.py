"""Build script for the optional compiled kernel extension.

The package works without the extension (a numpy fallback is selected at
import time); building it just makes tree induction and traversal fast.
"""

from setuptools import Extension, setup

try:
    import numpy as np
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

if cythonize is not None:
    directives = {
        "language_level": "3",
        "boundscheck": False,
        "wraparound": False,
        "cdivision": True,
    }
    ext_modules = cythonize(
        [
            Extension(
                "satcause._kernels._split_cy",
                ["src/satcause/_kernels/_split_cy.pyx"],
                include_dirs=[np.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        compiler_directives=directives,
    )
else:
    ext_modules = []

setup(ext_modules=ext_modules)

"""Build script: compiles the optional Cython vote-count kernel.

The package works without the extension (a NumPy fallback is selected at
import time), so any compilation failure downgrades to a pure-Python build
instead of aborting the install.
"""

import sys

from setuptools import setup

ext_modules = []
try:
    import numpy as np
    from Cython.Build import cythonize
    from setuptools.extension import Extension

    ext_modules = cythonize(
        [
            Extension(
                "sing._kernels",
                ["src/sing/_kernels.pyx"],
                include_dirs=[np.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except Exception as exc:  # pragma: no cover - depends on toolchain
    print(f"sing: skipping compiled kernel ({exc!r}); using the pure-Python fallback", file=sys.stderr)

setup(ext_modules=ext_modules)

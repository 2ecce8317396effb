"""Build hook: compile the optional kernel extension, fall back to pure Python.

The package works without the extension (qds.backend picks the NumPy
implementation at import time), so any compiler failure here downgrades to
a pure-Python install instead of aborting.
"""

from setuptools import setup

ext_modules = []
try:
    import numpy as np
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [
            Extension(
                "qds._kernels",
                ["src/qds/_kernels.pyx"],
                include_dirs=[np.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except Exception as exc:  # pragma: no cover - exercised only without toolchain
    print(f"qds: skipping compiled kernels ({exc}); pure-Python fallback will be used")
    ext_modules = []

setup(ext_modules=ext_modules)

"""Build script: compiles the optional C kernel extension.

The package works without the extension (a NumPy fallback is selected at
import time), so any failure to cythonize or compile downgrades to a
pure-Python build instead of aborting the install.
"""

from setuptools import setup

ext_modules = []
try:
    import numpy
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [
            Extension(
                "probdistort._ckernels",
                ["src/probdistort/_ckernels.pyx"],
                include_dirs=[numpy.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        compiler_directives={"language_level": 3},
    )
except Exception as exc:  # pragma: no cover - exercised only on broken toolchains
    print(f"probdistort: skipping C kernels ({exc}); using pure-Python fallback")

setup(ext_modules=ext_modules)

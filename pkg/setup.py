"""Build hook: compile the Cython kernel, falling back to pure Python.

The package is fully functional without the extension (workbench.kern
selects the pure-Python twin at import time); the build therefore treats
compilation failures as non-fatal.
"""

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize
    ext_modules = cythonize(
        ["src/workbench/_kern.pyx"],
        language_level=3,
    )
except Exception as exc:        # pragma: no cover
    print("workbench: skipping compiled kernel (%s)" % exc)

setup(ext_modules=ext_modules)

"""Build script: compiles the optional range-coder extension.

The package works without the extension (a pure-Python twin of the coder
is selected at import time), so any build failure here downgrades to a
pure build instead of aborting the install.
"""

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/meshpress/_coder_c.pyx"],
        language_level=3,
    )
except Exception as exc:  # pragma: no cover - build-environment dependent
    print(f"meshpress: building without compiled coder ({exc})")

setup(ext_modules=ext_modules)

"""Build hook for the optional GMP sweep accelerator.

The package is pure Python plus one optional C extension that speeds up the
closed-form column sweeps.  If the extension cannot be compiled (no compiler,
no libgmp headers), the build still succeeds and the package transparently
falls back to the pure-Python sweep implementation.
"""

import os

from setuptools import Extension, setup

_src = os.path.join("src", "lucaskit", "_fastsweep.c")

setup(
    ext_modules=[
        Extension(
            "lucaskit._fastsweep",
            sources=[_src],
            libraries=["gmp"],
            optional=True,
        )
    ]
    if os.path.exists(_src)
    else [],
)

import os

from setuptools import Extension, setup

ext_modules = []
if not os.environ.get("FDWAVE_NO_EXTENSION"):
    try:
        from Cython.Build import cythonize
    except ImportError:
        cythonize = None
    if cythonize is not None:
        ext_modules = cythonize(
            [
                Extension(
                    "fdwave._ckernels",
                    ["src/fdwave/_ckernels.pyx"],
                    extra_compile_args=["-O3", "-fcx-limited-range"],
                    optional=True,
                )
            ],
            compiler_directives={"language_level": 3},
        )

setup(ext_modules=ext_modules)

import numpy
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
    USE_CYTHON = True
except ImportError:
    cythonize = None
    USE_CYTHON = False

ext_suffix = ".pyx" if USE_CYTHON else ".c"

extensions = [
    Extension(
        "pigeonstats._ext",
        [f"src/pigeonstats/_ext{ext_suffix}"],
        include_dirs=[numpy.get_include()],
        # No -ffast-math: the counting kernels rely on exact IEEE comparisons
        # at half-open region boundaries.
        extra_compile_args=["-O3"],
    )
]

if USE_CYTHON:
    ext_modules = cythonize(extensions, compiler_directives={"language_level": "3"})
else:
    ext_modules = extensions

setup(ext_modules=ext_modules)

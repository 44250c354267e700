"""Build the optional Cython kernels; the package still installs without them."""
import sys

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext

ext_modules = []
try:
    import numpy as np
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [Extension(
            "propbo._kernels",
            ["src/propbo/_kernels.pyx"],
            include_dirs=[np.get_include()],
            extra_compile_args=["-O3"],
            define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
        )],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    sys.stderr.write("Cython/numpy not available: installing pure-Python kernels only\n")


class OptionalBuildExt(build_ext):
    def run(self):
        try:
            super().run()
        except Exception as exc:  # noqa: BLE001
            sys.stderr.write(f"compiled kernels skipped: {exc}\n")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:  # noqa: BLE001
            sys.stderr.write(f"compiled kernel {ext.name} skipped: {exc}\n")


setup(ext_modules=ext_modules, cmdclass={"build_ext": OptionalBuildExt})

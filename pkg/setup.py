import os

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    """Build the compiled kernels if possible; the package falls back to the
    pure-Python backend when the extension is missing."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # missing compiler etc.
            self._warn(exc)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            self._warn(exc)

    @staticmethod
    def _warn(exc):
        print(f"WARNING: compiled kernels not built ({exc}); "
              "installing with the pure-Python backend only")


ext_modules = []
cmdclass = {}
if not os.environ.get("CIRCKEP_NO_EXT"):
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [
                Extension(
                    "circkep._core._speedups",
                    ["src/circkep/_core/_speedups.pyx"],
                    extra_compile_args=["-O3"],
                )
            ],
            language_level="3",
        )
        cmdclass = {"build_ext": OptionalBuildExt}
    except ImportError:
        print("WARNING: Cython not available; installing pure-Python backend only")

setup(ext_modules=ext_modules, cmdclass=cmdclass)

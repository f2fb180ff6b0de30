from setuptools import Extension, setup
from Cython.Build import cythonize

setup(
    ext_modules=cythonize(
        [
            Extension(
                "blockenc._kernels._cheb",
                ["src/blockenc/_kernels/_cheb.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        language_level=3,
    )
)

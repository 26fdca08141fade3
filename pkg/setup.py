from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:  # pure-Python install; the fallback kernels are used
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "mmwave_norm._kernels",
                ["src/mmwave_norm/_kernels.pyx"],
                optional=True,
            )
        ],
        compiler_directives={"embedsignature": True},
    )

setup(ext_modules=ext_modules)

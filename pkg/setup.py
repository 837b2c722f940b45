from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "a2building.kernels._speed",
                ["src/a2building/kernels/_speed.pyx"],
                optional=True,
            )
        ],
        language_level=3,
    )
except ImportError:
    # pure-Python kernels are selected at import when the extension is absent
    ext_modules = []

setup(ext_modules=ext_modules)

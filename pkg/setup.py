"""
tvcnlab
Growth, structure and traffic of time-varying communication networks
"""
from setuptools import setup, find_packages

short_description = "Growth, structure and traffic of time-varying communication networks."

try:
    with open("README.md", "r") as handle:
        long_description = handle.read()
except FileNotFoundError:
    long_description = short_description

version = {}
with open("tvcnlab/_version.py", "r") as handle:
    exec(handle.read(), version)

setup(
    # Self-descriptive entries which should always be present
    name='tvcnlab',
    author='tvcnlab developers',
    description=short_description,
    long_description=long_description,
    long_description_content_type="text/markdown",
    version=version["__version__"],
    python_requires=">=3.7",
    license='BSD-3-Clause',
    # Which Python importable modules should be included when your package is installed
    packages=find_packages(),
    include_package_data=True,
    package_data={"tvcnlab": ["data/experiments/*.json", "data/networks/*.edges", "data/README.md"]},

    install_requires=[
        'msgpack>=0.6.1',
        'numpy>=1.17',
        'pandas',
        'pyyaml>=5.1',
        'pydantic>=1.8,<2',
        'qcelemental>=0.20',
        'tqdm',
        'networkx>=2.4',
    ],

    tests_require=[
        'pytest',
        'pytest-cov',
    ],

    entry_points={
        "console_scripts": ["tvcnlab=tvcnlab.cli:main"],
    },

    classifiers=[
        'Development Status :: 4 - Beta',
        'Intended Audience :: Science/Research',
        'Programming Language :: Python :: 3',
    ],

    # Manual control if final package is compressible or not, set False to prevent the .egg from being made
    zip_safe=False,
)

import os
from setuptools import find_packages
from setuptools import setup

with open(os.path.join("ambient", "VERSION")) as file:
    version = file.read().strip()

with open("README.rst") as file:
    long_description = file.read()


setup(
    name="ambient-metric",
    description="Patterson-Walker metrics, their Fefferman-Graham ambient metrics and exact curvature checks",
    long_description=long_description,
    license="Apache License 2.0",
    version=version,
    keywords="ambient metric fefferman graham patterson walker affine connection ricci q-curvature symbolic",
    packages=find_packages(include=["ambient*"]),
    package_dir={"ambient": "ambient"},
    package_data={"ambient": ["VERSION"]},
    include_package_data=True,
    zip_safe=False,
    install_requires=["sympy>=1.12", "numpy>=1.22", "jmespath"],
    entry_points={"console_scripts": ["ambient = ambient.cli:main"]},
    python_requires=">=3.9",
    platforms="Platform Independent",
    classifiers=[
        "Development Status :: 4 - Beta",
        "Environment :: Console",
        "Intended Audience :: Science/Research",
        "Intended Audience :: Education",
        "License :: OSI Approved :: Apache Software License",
        "Natural Language :: English",
        "Operating System :: OS Independent",
        "Programming Language :: Python",
        "Programming Language :: Python :: 3.9",
        "Programming Language :: Python :: 3.10",
        "Programming Language :: Python :: 3.11",
        "Programming Language :: Python :: 3.12",
        "Programming Language :: Python :: 3.13",
        "Topic :: Scientific/Engineering :: Mathematics",
        "Topic :: Software Development :: Libraries :: Python Modules",
    ],
)

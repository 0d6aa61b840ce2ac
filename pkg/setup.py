from setuptools import setup, find_packages

with open('README.md') as f:
    readme = f.read()

setup(
    name="quasirecon",
    version="0.1.0",
    description="Quasiprobability reconstruction of a decaying cavity field "
                "from dispersive atomic polarization measurements",
    long_description=readme,
    long_description_content_type="text/markdown",
    package_dir={"": "."},
    packages=find_packages(exclude=["tests", "examples", "examples.*"]),
    zip_safe=False,
    python_requires=">=3.8",
    install_requires=[
        "numpy>=1.20",
        "scipy>=1.7",
    ],
    extras_require={
        "dev": [
            "pytest==6.1.0",
            "flake8==3.8.4",
            "pytest-cov==2.10.1"
        ]
    },
    entry_points={
        "console_scripts": [
            "quasirecon=quasirecon.cli:main",
        ],
    },
    license="MIT",
    include_package_data=True,
    classifiers=[
        "Intended Audience :: Science/Research",
        "Operating System :: POSIX :: Linux",
        "Development Status :: 2 - Pre-Alpha",
        "Programming Language :: Python :: 3",
        "License :: OSI Approved :: MIT License",
        "Topic :: Scientific/Engineering :: Physics",
    ],
)

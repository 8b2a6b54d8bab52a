from setuptools import setup, find_packages

setup(
    name="harvestr",
    version="0.1.0",
    packages=find_packages(exclude=["tests", "tests.*", "examples", "examples.*"]),
    install_requires=[
        "pandas>=1.5",
        "numpy",
        "scipy",
        "rich",
    ],
    entry_points={
        "console_scripts": [
            "harvestr=harvestr.cli:main",
        ],
    },
    author="Michael McDuffee",
    author_email="your.email@example.com",
    description="A command line tool for railway return-current energy harvesting",
    keywords="energy harvesting, railway, magnetic field, ferrite coil",
    python_requires=">=3.8",
    extras_require={
        "dev": [
            "ruff",
            "pytest",
        ],
        "plot": [
            "matplotlib",
        ],
    },
)

from setuptools import setup, find_packages

setup(
    name="benney-cli",
    version="0.1",
    packages=find_packages(exclude=["tests", "tests.*"]),
    install_requires=[
        "click",
        "rich",
        "numpy",
        "scipy"
    ],
    extras_require={
        "test": ["pytest"],
    },
    entry_points={
        "console_scripts": [
            "benney-cli=benney_cli.cli:cli"
        ],
    },
)

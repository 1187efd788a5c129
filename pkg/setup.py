from setuptools import setup

with open("README.md", "r") as f:
    desc = f.read()

setup(
    name="discrim-cubic",
    version="0.1.0",
    description="Discrim: computational verification of the discriminator of x^3 + x, with exact character sums, an executable case analysis and resumable parallel sweeps.",
    long_description=desc,
    long_description_content_type="text/markdown",
    url="https://github.com/draktr/discrim-cubic",
    author="draktr",
    license="MIT License",
    packages=["discrim"],
    python_requires=">=3.8",
    install_requires=["numpy", "pandas", "numba", "joblib>=1.3", "click", "tqdm"],
    extras_require={"test": ["pytest", "sympy"]},
    entry_points={"console_scripts": ["discrim=discrim.cli:main"]},
    keywords="number-theory, discriminator, character-sums, verification, modular-arithmetic",
    classifiers=[
        "Development Status :: 4 - Beta",
        "Intended Audience :: Education",
        "Intended Audience :: Science/Research",
        "License :: OSI Approved :: MIT License",
        "Operating System :: OS Independent",
        "Programming Language :: Python",
        "Topic :: Scientific/Engineering",
        "Topic :: Scientific/Engineering :: Mathematics",
    ],
    project_urls={
        "Documentation": "https://discrim-cubic.readthedocs.io/en/latest/",
        "Issues": "https://github.com/draktr/discrim-cubic/issues",
    },
)

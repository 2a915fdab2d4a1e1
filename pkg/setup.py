"""
Setup configuration for BohmianWalls
"""

from setuptools import setup

# Read README
with open("README.md", "r", encoding="utf-8") as fh:
    long_description = fh.read()

# Read requirements
with open("requirements.txt", "r", encoding="utf-8") as fh:
    requirements = [line.strip() for line in fh if line.strip() and not line.startswith("#")]

setup(
    name="bohmian-walls",
    version="1.0.0",
    author="BohmianWalls Team",
    author_email="team@bohmian-walls.org",
    description="Quantum-potential walls of financial return distributions across time scales",
    long_description=long_description,
    long_description_content_type="text/markdown",
    url="https://github.com/yourusername/bohmian-walls",
    project_urls={
        "Bug Tracker": "https://github.com/yourusername/bohmian-walls/issues",
        "Documentation": "https://bohmian-walls.readthedocs.io/",
        "Source Code": "https://github.com/yourusername/bohmian-walls",
    },
    packages=["bohmian_walls"],
    classifiers=[
        "Development Status :: 4 - Beta",
        "Intended Audience :: Science/Research",
        "Intended Audience :: Financial and Insurance Industry",
        "Topic :: Scientific/Engineering :: Physics",
        "Topic :: Office/Business :: Financial",
        "License :: OSI Approved :: MIT License",
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.9",
        "Programming Language :: Python :: 3.10",
        "Programming Language :: Python :: 3.11",
        "Programming Language :: Python :: 3.12",
        "Operating System :: OS Independent",
    ],
    python_requires=">=3.9",
    install_requires=requirements,
    extras_require={
        "dev": [
            "pytest>=6.0",
            "pytest-cov>=2.0",
            "black>=21.0",
            "flake8>=3.8",
            "mypy>=0.812",
        ],
    },
    entry_points={
        "console_scripts": [
            "bohmian-walls=bohmian_walls.cli:main",
        ],
    },
    include_package_data=True,
    package_data={
        "bohmian_walls": [
            "schemas/*.json",
        ],
    },
    keywords="econophysics quantum-potential bohmian-mechanics returns scaling hurst",
    zip_safe=False,
)

import setuptools

setuptools.setup(
    name="g2-contact",
    version="0.1.0",
    author="The g2-contact developers",
    description="Almost contact metric structures and 3-structures induced by G2 cross products.",
    long_description=open('README.md', "r", encoding="utf-8").read(),
    long_description_content_type="text/markdown",
    license="Apache License 2.0",
    keywords='g2 almost-contact cross-product differential-geometry python3',
    packages=setuptools.find_packages(exclude=["tests", "tests.*"]),
    package_data={"g2_contact.fields": ["field_specs/*.json"]},
    python_requires=">=3.11",
    classifiers=[
        "Programming Language :: Python :: 3",
        "License :: OSI Approved :: Apache Software License",
        "Operating System :: OS Independent",
    ],
    install_requires=[
        "numpy",
        "pandas",
        "scipy"
    ],
    extras_require={
        "test": [
            "hypothesis",
            "pytest"
        ]
    },
    entry_points={
        "console_scripts": [
            "g2-contact=g2_contact.cli_report:main"
        ]
    },
)

#!/usr/bin/env python
from setuptools import setup

from spruce.version import get_version


long_description = open("README.rst").read()


setup(
    name='spruce-sim',
    version=get_version('short'),
    description='spruce simulates multi-armed sequential testing by betting with anytime-valid e-processes.',
    long_description=long_description,
    packages=['spruce'],
    package_data={'spruce': ['templates/*.txt']},
    python_requires=">=3.7",
    install_requires=['numpy>=1.17', 'scipy>=1.7', 'jinja2<4.0'],
    entry_points={
        'console_scripts': [
            'spruce = spruce.main:main',
        ]
    },
    classifiers=[
        'Development Status :: 4 - Beta',
        'Environment :: Console',
        'Intended Audience :: Science/Research',
        'License :: OSI Approved :: BSD License',
        'Operating System :: MacOS :: MacOS X',
        'Operating System :: POSIX',
        'Operating System :: Unix',
        'Programming Language :: Python :: 3',
        'Topic :: Scientific/Engineering :: Mathematics',
    ],
)

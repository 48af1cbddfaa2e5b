#!/usr/bin/env python
# -*- coding: utf-8 -*-

from setuptools import setup, find_packages, Command
from shutil import rmtree
import sys
import os

here = os.path.abspath(os.path.dirname(__file__))
NAME = 'alphaHS'
REQUIRES_PYTHON = '>=3.8.0'
REQUIRED_DEP = ['numpy>=1.21', 'scipy>=1.7', 'pandas>=1.5']
about = {}

with open(os.path.join(here, 'libs', '__init__.py')) as f:
    exec(f.read(), about)

with open("README.rst", "rb") as readme_file:
    readme = readme_file.read().decode("UTF-8")

with open("HISTORY.rst", "rb") as history_file:
    history = history_file.read().decode("UTF-8")

required_packages = find_packages(exclude=['tests', 'examples', 'examples.*'])
required_packages.append('alphaHS')


class UploadCommand(Command):
    """Support setup.py upload."""

    description = 'Build and publish the package.'

    user_options = []

    @staticmethod
    def status(s):
        """Prints things in bold."""
        print('\033[1m{0}\033[0m'.format(s))

    def initialize_options(self):
        pass

    def finalize_options(self):
        pass

    def run(self):
        try:
            self.status('Removing previous builds…')
            rmtree(os.path.join(here, 'dist'))
        except OSError:
            self.status('Fail to remove previous builds..')

        self.status('Building Source and Wheel distribution…')
        os.system('{0} setup.py sdist bdist_wheel'.format(sys.executable))

        self.status('Uploading the package to PyPI via Twine…')
        os.system('twine upload dist/*')

        self.status('Pushing git tags…')
        os.system('git tag -d v{0}'.format(about['__version__']))
        os.system('git tag v{0}'.format(about['__version__']))

        sys.exit()


setup(
    name=NAME,
    version=about['__version__'],
    description="Numerical alpha-dissipative solutions of the Hunter-Saxton equation with convergence experiments",
    long_description=readme + '\n\n' + history,
    python_requires=REQUIRES_PYTHON,
    package_dir={'alphaHS': '.'},
    packages=required_packages,
    entry_points={
        'console_scripts': [
            'alphaHS=alphaHS.alphaHS:main'
        ]
    },
    include_package_data=True,
    install_requires=REQUIRED_DEP,
    license="MIT license",
    zip_safe=False,
    keywords='Hunter-Saxton wave breaking Lagrangian numerical scheme convergence',
    classifiers=[
        'Development Status :: 4 - Beta',
        'Intended Audience :: Science/Research',
        'License :: OSI Approved :: MIT License',
        'Natural Language :: English',
        'Programming Language :: Python :: 3',
        'Programming Language :: Python :: 3.8',
        'Programming Language :: Python :: 3.9',
        'Programming Language :: Python :: 3.10',
        'Programming Language :: Python :: 3.11',
        'Topic :: Scientific/Engineering :: Mathematics',
    ],
    package_data={'data': ['data/*.json']},
    # $ setup.py publish support.
    cmdclass={
        'upload': UploadCommand,
    }
)

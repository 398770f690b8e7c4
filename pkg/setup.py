#!/usr/bin/env python
# coding=utf-8

import io
import sys

import quditfuse

from setuptools import setup, find_packages
from setuptools.command.test import test as TestCommand


class PyTest(TestCommand):
    user_options = [("pytest-args=", "a", "Arguments to pass to pytest")]

    def initialize_options(self):
        TestCommand.initialize_options(self)
        self.pytest_args = ""

    def run_tests(self):
        import shlex

        # import here, cause outside the eggs aren't loaded
        import pytest

        errno = pytest.main(shlex.split(self.pytest_args))
        sys.exit(errno)


with io.open("README.md", encoding="utf8") as f:
    readme = f.read()
readme = readme.replace("latest", "v" + quditfuse.__version__)

install_requires = open("requirements.txt").readlines()
setup(
    name='QuditFuse',
    version=quditfuse.__version__,
    author=quditfuse.__author__,
    author_email='2504454577@qq.com',
    packages=find_packages(exclude=['tests']),
    keywords="qudit fusion photonics cluster-state linear-optics",
    description='QuditFuse: simulate and optimize type-II fusion of qudit cluster states',
    long_description=readme,
    long_description_content_type="text/markdown",
    install_requires=install_requires,
    include_package_data=True,
    license='MIT License',
    entry_points={
        'console_scripts': ['quditfuse = quditfuse.cli:main'],
    },
    classifiers=[
        'Development Status :: 4 - Beta',
        'License :: OSI Approved :: MIT License',
        'Operating System :: MacOS',
        'Operating System :: POSIX',
        'Operating System :: POSIX :: Linux',
        'Programming Language :: Python :: 3.8',
        'Programming Language :: Python :: 3.9',
        'Programming Language :: Python :: 3.10',
        'Programming Language :: Python :: Implementation :: CPython',
        'Intended Audience :: Science/Research',
        'Topic :: Scientific/Engineering :: Physics',
    ],
    tests_require=['pytest'],
    cmdclass={"pytest": PyTest},
)

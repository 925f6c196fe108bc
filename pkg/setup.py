
from setuptools import find_packages, setup

setup(
    name='treadmill-sled',
    version='0.1.0',
    packages=find_packages(exclude=['tests']),
    package_data={'src.io_cli': ['log_config.json']},
    entry_points={
        'console_scripts': ['treadmill=src.io_cli.cli:main']},
    )

from setuptools import setup
from codecs import open

# Parse the version from the module without importing
version = '0.0.0'
with open('jcthermo/__init__.py') as f:
    for line in f:
        if line.find('__version__') >= 0:
            version = line.split('=')[1].strip().strip('"').strip("'")
            break

# Retrieve dependencies
with open('requirements.txt', 'r') as f:
    reqs = f.readlines()
with open('test-requirements.txt', 'r') as f:
    test_reqs = f.readlines()

# Retrieve readme
with open('README.rst', 'r') as f:
    long_desc = f.read()

setup(
    name='jcthermo',
    version=version,
    description='Steady states, thermalization and thermal entanglement of the open Jaynes-Cummings model.',
    long_description=long_desc,
    packages=['jcthermo'],
    package_data={'jcthermo': ['conf.yml', 'experiment_configs/*.json', 'experiment_configs/readme.md']},
    install_requires=reqs,
    tests_require=test_reqs,
    entry_points={'console_scripts': ['jcthermo = jcthermo.cli:main']},
    classifiers=(
        'Development Status :: 3 - Alpha',
        'Intended Audience :: Science/Research',
        'Programming Language :: Python',
        'Programming Language :: Python :: 3',
        'Topic :: Scientific/Engineering :: Physics',
    ),
)

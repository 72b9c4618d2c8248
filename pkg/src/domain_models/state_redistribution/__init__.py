"""
State redistribution lab: protocol simulation, inequality checkers and the
services behind the qsrlab command line.
"""

__version__ = "0.1.0"

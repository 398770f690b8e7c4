__version__ = '0.3.0'
__author__ = 'pppwaw'
__license__ = 'MIT'

__all__ = ["QuditLab"]

from quditfuse.lab import QuditLab

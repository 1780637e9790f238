"""Contextual-deletion channels, codes and capacity bounds over binary strings.

Bit strings are plain Python ``str`` objects over the alphabet ``'0'``/``'1'``.
Positions in the library API are 1-indexed; the command line uses 0-indexed
positions.
"""

__version__ = "0.1.0"

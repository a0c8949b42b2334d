"""Exact computational algebra for the height-2, p=3 Morava stabilizer group.

Subpackages cover: truncated Witt vector arithmetic over W(F9), the
stabilizer algebra O2 and its finite quotients, graded polynomial models
of the Lubin-Tate ring with their finite group actions, group cohomology
engines, finite-level resolution checks, and bigraded spectral-sequence
chart bookkeeping.
"""

__version__ = "0.1.0"

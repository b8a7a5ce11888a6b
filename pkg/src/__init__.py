"""
Queen-Spectra
=============
Spectrum of the toroidal 3D queen graph on (Z_n)^3: eigenvalue formula,
multiplicity polynomials, pair-orbit classification and an independent
graph-level oracle.
"""

__version__ = "1.0.0"
TOOL_NAME = "queen-spectra"

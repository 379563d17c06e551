"""Quasi-Monte Carlo training-point selection toolkit for implicit-field 3D reconstruction.

Point-set generators, farthest-point subset selection, exact star
discrepancy, SDF grid baking, a small field regressor, symmetric feature
fusion, marching-cubes extraction and reconstruction metrics, glued
together by the ``qmcfield`` command line tool.
"""

__version__ = "0.1.0"

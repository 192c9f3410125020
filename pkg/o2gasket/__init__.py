"""
O(2) Gasket Weights

Construction, validation and asymptotic analysis of critical O(2)
loop-decorated planar-map weight sequences, with Monte Carlo checks of the
underlying random-walk identities.
"""

__version__ = "0.1.0"

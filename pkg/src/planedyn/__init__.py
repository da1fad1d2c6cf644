"""planedyn: exact-arithmetic toolkit for planar PL dynamics.

Certifies dynamical statements about piecewise-linear disk
homeomorphisms with exact rational geometry: fixed-point indices of
curves, free brick decompositions with a transition calculus and
closed-chain recurrence certificates, translation-arc families in
generic position, the combinatorial minimax on arc configurations, and
the end-to-end chain-extraction pipeline.
"""

from .rational import Q, fmt_q, to_q

__all__ = ["Q", "to_q", "fmt_q"]
__version__ = "0.1.0"

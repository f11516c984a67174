"""ketsim: a desk-scale quantum simulator.

Subpackages by layer: ``linalg`` (complex vectors/matrices), ``state``
(kets, density operators, partial trace), ``measure`` (projective
measurement, seeded randomness), ``gates`` (gate zoo, circuits, time
evolution), ``entropy``, ``protocols`` (teleportation), ``shor``
(period-finding factorization), ``grover`` (amplitude-amplification
search), and ``cli``.
"""
from ._kernels import BACKEND as kernel_backend

__version__ = "0.1.0"
__all__ = ["kernel_backend", "__version__"]

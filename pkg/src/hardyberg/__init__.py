"""Embeddings between Hardy and weighted Bergman spaces on the unit ball.

``params`` decides containment and compactness exactly; ``funcrep``,
``integrate``, ``norms`` and ``geometry`` compute the objects behind those
decisions; ``experiments`` turns them into pass/fail sweeps.
"""
__version__ = "0.1.0"

from .params import Bergman, Hardy, classify, growth_envelope, parse_space, tight_fitting  # noqa: E402

__all__ = ["Bergman", "Hardy", "classify", "growth_envelope", "parse_space", "tight_fitting", "__version__"]

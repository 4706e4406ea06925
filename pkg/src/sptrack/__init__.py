"""Multiple-alignment recognition and species-based particle swarm tracking.

Subpackages: ``sp`` (patterns, alignment, coding, recognition), ``tracker``
(appearance models, occlusion competition, species), ``sim`` (synthetic
scenes and metrics).  ``pso`` holds the annealed swarm optimizer and
``learn`` the pattern derivation and corpus segmentation.
"""
__version__ = "0.1.0"

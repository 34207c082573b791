"""Random two-dimensional shadows of polytopes: sampling, exact counts and bound checks."""

__version__ = "0.1.0"

from .geometry import Frame2, hull2d, rng_stream, sample_frame
from .polytope import (
    VPolytope,
    Zonotope,
    augmented_permutahedron,
    birkhoff,
    edge_stats,
    hypercube,
    permutahedron,
    zn_basis,
    zn_parallel,
)
from .shadow import estimate_shadow_size, shadow, shadow_path

__all__ = [
    "Frame2", "VPolytope", "Zonotope", "augmented_permutahedron", "birkhoff", "edge_stats",
    "estimate_shadow_size", "hull2d", "hypercube", "permutahedron", "rng_stream", "sample_frame",
    "shadow", "shadow_path", "zn_basis", "zn_parallel",
]

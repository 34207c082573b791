# # Counting shadow vertices from the normal fan
#
# Rotating an objective around the frame's unit circle passes through the
# normal cones of exactly the vertices that appear on the shadow. The arcs
# are computed without any planar hull.

# In[1]:

import math

import numpy as np

from shadowlab import augmented_permutahedron, hypercube, rng_stream, sample_frame, shadow
from shadowlab.dualfan import (arc_count, augmented_permutahedron_delta,
                               augmented_permutahedron_delta_sum_form, delta_of_polytope)
from shadowlab.polytope import zonotope_vertices

# In[2]:

P = hypercube(3)
f = sample_frame(rng_stream(5), 3)
count, arcs = arc_count(P, f)
print("arc count", count, "| hull count", shadow(P, f).num_vertices)
for v, a, b in arcs.arcs:
    print(f"  vertex {v} {P.vertices[v].astype(int)}: [{a:.3f}, {b:.3f}]  length {b - a:.3f}")
print("total", round(arcs.total_measure / math.pi, 12), "pi")

# delta: how close a ray of some normal cone comes to the span of the other rays.

# In[3]:

print(" n   computed   sqrt(n/(2k(n-k)))   sum-of-norms form")
for n in range(2, 7):
    d = delta_of_polytope(augmented_permutahedron(n)).delta
    print(f"{n:2d}  {d:.7f}  {augmented_permutahedron_delta(n):.7f}          {augmented_permutahedron_delta_sum_form(n):.7f}")

# In[4]:

Pv = zonotope_vertices(augmented_permutahedron(4))
counts = {arc_count(Pv, sample_frame(rng_stream(6, t), 4))[0] for t in range(50)}
print("augmented permutahedron(4) arc counts over 50 frames:", counts)

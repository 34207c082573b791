# # Random shadows of the cube and the Birkhoff polytope
#
# Project a polytope onto a random 2-plane and count the vertices of the
# resulting polygon. For the unit cube in R^n the average is exactly 2n.

# In[1]:

import numpy as np

from shadowlab import birkhoff, estimate_shadow_size, hypercube, rng_stream, sample_frame, shadow, shadow_path

# In[2]:

for n in range(2, 7):
    est = estimate_shadow_size(hypercube(n), trials=2000, seed=1)
    print(f"cube n={n}: mean {est.mean:.3f} +- {est.std_error:.3f}  (range {est.min_seen}..{est.max_seen})")

# One shadow, in detail. The preimages along the upper chain are the
# vertices the shadow-vertex pivot rule walks through.

# In[3]:

P = hypercube(4)
f = sample_frame(rng_stream(7), 4)
s = shadow(P, f)
print("hull points:\n", np.round(s.hull_points, 3))
print("preimages:", s.preimage_indices)
print("path:", shadow_path(s), "->", [P.vertices[i].astype(int).tolist() for i in shadow_path(s)])

# In[4]:

B = birkhoff(3)
est = estimate_shadow_size(B, trials=5000, seed=2)
print(f"birkhoff(3): {B.num_vertices} vertices, mean shadow {est.mean:.3f} +- {est.std_error:.3f}")

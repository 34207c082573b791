# # Points in a cone and their distance to the cone's walls
#
# Uniform points in a simplicial cone (cut by the unit ball or sphere) rarely
# sit very close to a wall. Two Monte Carlo checks against explicit bounds.

# In[1]:

import numpy as np

from shadowlab import rng_stream
from shadowlab.dualfan import sample_cone_ball, validate_arrangement_distance, validate_slab_probability

rays = np.array([[1.0, 0, 0], [1, 1, 0], [1, 1, 1]])
rays /= np.linalg.norm(rays, axis=1, keepdims=True)

# In[2]:

s = sample_cone_ball(rays, rng_stream(1), 5000)
print("acceptance rate", round(s.acceptance_rate, 4), "max norm", np.linalg.norm(s.points, axis=1).max())

# In[3]:

for eps in (0.01, 0.05, 0.2):
    c = validate_slab_probability(rays, 0, eps, 20_000, rng_stream(2))
    print(f"eps={eps}: P(near wall) = {c.empirical:.4f} +- {c.std_error:.4f}  bound {c.bound:.4f}")

# In[4]:

for surface in ("sphere", "ball"):
    c = validate_arrangement_distance(rays, 20_000, rng_stream(3), surface)
    print(f"{surface}: mean distance {c.empirical:.4f}  lower bound {c.bound:.5f}  (h = {c.height:.4f})")

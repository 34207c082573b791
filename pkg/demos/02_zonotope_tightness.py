# # Zonotopes: exact shadow sizes and how tight the diameter bounds are
#
# Every generic shadow of a zonotope has two vertices per direction class
# of generators. Two perturbed families show that each side of the
# diameter/edge-length sandwich can be nearly attained.

# In[1]:

from shadowlab import augmented_permutahedron, rng_stream, zn_basis, zn_parallel
from shadowlab.bounds import check_shadow_sandwich
from shadowlab.shadow import estimate_shadow_size

# In[2]:

for n in (3, 4, 5):
    z = augmented_permutahedron(n)
    sampled = estimate_shadow_size(z, trials=300, seed=0, exact=False)
    print(f"augmented permutahedron n={n}: sampled {sampled.mean} (se {sampled.std_error}), n(n-1)+2 = {n*(n-1)+2}")

# k nearly parallel unit segments: the lower bound 2 gdiam / M is almost exact.

# In[3]:

print(" k  estimate  lower   upper   est/lower")
for k in range(2, 11, 2):
    r = check_shadow_sandwich(zn_parallel(k, 0.05, rng_stream(3, k)), trials=100, seed=0)
    print(f"{k:2d}  {r.estimate:7.1f}  {r.lower:6.3f}  {r.upper:6.2f}  {r.slack_ratios[0]:.4f}")

# Unit basis vectors: the upper bound pi gdiam / (C_n m) stays within a small factor.

# In[4]:

print(" n  estimate  upper   upper/est")
for n in range(2, 9):
    r = check_shadow_sandwich(zn_basis(n, 0.0, rng_stream(4)), trials=100, seed=0)
    print(f"{n:2d}  {r.estimate:7.1f}  {r.upper:6.2f}  {r.slack_ratios[1]:.3f}")

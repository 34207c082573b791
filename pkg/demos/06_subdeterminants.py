# # delta versus the largest subdeterminant
#
# For a polytope with integer facet normals A, delta is at least
# 1 / (n Delta^2), Delta being the largest absolute minor of A.

# In[1]:

import numpy as np

from shadowlab import augmented_permutahedron, hypercube
from shadowlab.bounds import check_delta_subdeterminant_relation, max_abs_subdeterminant
from shadowlab.polytope import augmented_permutahedron_facet_matrix

# In[2]:

print(max_abs_subdeterminant([[2, 1], [1, 2]]), max_abs_subdeterminant(np.eye(4, dtype=int)))

# In[3]:

cube = check_delta_subdeterminant_relation(hypercube(3), np.vstack([np.eye(3, dtype=int), -np.eye(3, dtype=int)]))
print("cube:", cube.as_dict())
for n in (3, 4):
    r = check_delta_subdeterminant_relation(augmented_permutahedron(n), augmented_permutahedron_facet_matrix(n))
    print(f"augmented permutahedron n={n}: delta {r.estimate:.4f} >= {r.lower:.2e}  (Delta = {r.details['Delta']})")

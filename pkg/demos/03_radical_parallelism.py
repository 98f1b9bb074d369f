# %% [markdown]
# # Radical parallelism
#
# Two points are parallel when every point distant from the first is also
# distant from the second.  The library computes this from neighbourhoods and
# again from images on the line over R/rad R, then compares.

# %%
import numpy as np

from ringline import build_ring, enumerate_points, parallel_classes, parallel_matrix
from ringline.radpar import quotient_parallel_matrix

for desc in ["zmod(9)", "dual(gf(3))", "zmod(6)", "upper2(gf(3))"]:
    line = enumerate_points(build_ring(desc))
    rep = parallel_classes(line)
    same = np.array_equal(parallel_matrix(line), quotient_parallel_matrix(line))
    print(f"{desc:14s} {len(line):3d} points, {len(rep.classes):2d} classes of size {rep.class_size}, "
          f"quotient agrees: {same}, local: {rep.is_local}")

# %% [markdown]
# Over a local ring, parallel means non-distant.  Otherwise some non-distant
# pair is not parallel.

# %%
rep = parallel_classes(build_ring("anormal(gf(3))"))
p, q = rep.witness
print("non-distant but not parallel:", p, q)
print("parallel coincides with non-distant:", rep.relation_equal_to_nondistant)

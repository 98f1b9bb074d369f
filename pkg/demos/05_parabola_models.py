# %% [markdown]
# # Parabola models
#
# A B-map with b = t e bends the affine lines of R into parabolas.  Over the
# dual numbers the new lines are the vertical lines plus a family of
# parabolas.  Over the ternions the image of a plane is a saddle surface H.

# %%
import tempfile
from pathlib import Path

from ringline import algebra_of
from ringline import models

for q in (3, 4, 5):
    cmp = models.orbit_comparison(algebra_of(f"dual(gf({q}))"), 1)
    print(f"GF({q}): {cmp.t_orbit} translates of C, {cmp.n_orbit} curves in its N'-orbit")

# %%
A = algebra_of("dual(gf(5))")
ls = models.model_line_set(A, 1)
print(ls.tag_counts(), "linear space:", models.is_linear_space(ls.point_sets(), A.ring.size))

# %%
T = algebra_of("upper2(gf(3))")
rep = models.ternion_classify(T, 1)
for name, ok in rep.checks:
    print(f"{'ok ' if ok else 'BAD'} {name}")
print(rep.counts)

# %% [markdown]
# Real samples for plotting go to CSV.

# %%
out = Path(tempfile.gettempdir()) / "ringline_dual.csv"
text = models.export_figure_data("dual", 1.0, "-2:2:0.5", out)
print(out, "\n" + "\n".join(text.splitlines()[:5]))

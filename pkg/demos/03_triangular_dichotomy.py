"""u_n is locally nilpotent, but not nilpotent.

Run with ``python3 demos/03_triangular_dichotomy.py``.
"""

# %%
import random

from nilder.classifier import random_triangular
from nilder.triangular import local_nilpotency_of_fg_subalgebras, non_nilpotency_witness

# ad(d3) walks x3^L/L! d1 down to d1 in L steps, for any L
for length in (3, 6, 12):
    chain = non_nilpotency_witness(3, length)
    print(length, chain[0], "->", chain[-1])

# %%
# but each finitely generated subalgebra closes to a nilpotent algebra
rng = random.Random(7)
classes = []
for _ in range(20):
    sample = [random_triangular(rng, 4, degree=2) for _ in range(3)]
    classes.append(local_nilpotency_of_fg_subalgebras(sample))
print("classes of 20 random 3-generator subalgebras of u_4:", classes)

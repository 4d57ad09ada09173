"""Derivations of Q[x1, ..., xn]: brackets, constants and slices.

Run with ``python3 demos/01_brackets_and_slices.py``.
"""

# %%
from nilder.derivation import apply, bracket, find_slice, kernel_projection, local_nilpotency
from nilder.parsing import parse_derivation, parse_ratfunc

D = parse_derivation("x3*d2 + d3", 3)
E = parse_derivation("x2*d1", 3)
print("[D, E] =", bracket(D, E))
print("[E, D] =", bracket(E, D))

# %%
# D kills x1, and x2 - x3^2/2 is also a constant of D
for text in ("x1", "x2 - x3^2/2", "x2"):
    print(f"D({text}) =", apply(D, parse_ratfunc(text, 3)))

# %%
# D is triangular, so it is locally nilpotent and has a slice a with D(a) = 1
gens = [parse_ratfunc(f"x{i}", 3) for i in (1, 2, 3)]
print(local_nilpotency(D, gens))
p, a = find_slice(D, gens)
print("preslice", p, "slice", a, "D(a) =", apply(D, a))

# %%
# projecting x2 onto ker D along the slice
pi = kernel_projection(D, a, parse_ratfunc("x2", 3))
print("pi(x2) =", pi, " D(pi(x2)) =", apply(D, pi))

# %%
# x1*d1 is not locally nilpotent: its iterates on x1 never vanish
print(local_nilpotency(parse_derivation("x1*d1", 1), [parse_ratfunc("x1", 1)], cap=6))

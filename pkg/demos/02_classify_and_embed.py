"""Classify small nilpotent algebras of derivations and embed them in u_n.

Run with ``python3 demos/02_classify_and_embed.py``.
"""

# %%
from nilder.classifier import build_L1, build_L2, classify, embed, random_nilpotent
from nilder.lie import close_under_bracket, structure_report
from nilder.parsing import parse_derivations

alg = close_under_bracket(parse_derivations("d2; x3^2/2*d1; d3"))
report = structure_report(alg)
for key in ("basis", "rank", "center", "corank", "nilpotency_class"):
    print(f"{key:>16}: {report[key]}")

# %%
v = classify(alg)
print(v.case.value, "b =", v.b)
print("adapted basis:", [str(B) for B in v.adapted_basis])
print("all checks hold:", all(v.checks.values()))

# %%
emb = embed(v, alg)
for src, img in zip(emb.source, emb.images):
    print(f"{str(src):>16}  ->  {img}")
print(emb.pairs_checked, "bracket pairs checked")

# %%
# the truncated models are recovered by the classifier
for builder in (build_L1, build_L2):
    for k in (1, 2):
        model = builder(3, k)
        print(builder.__name__, k, model.dim, classify(model).case.value)

# %%
# a few seeded random algebras, including some that fall outside the scope
for seed in range(6):
    a = random_nilpotent(3, seed, 2)
    v = classify(a)
    print(seed, a.dim, v.case.value, v.reason or "")

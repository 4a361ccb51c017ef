# Exact arithmetic in the Cuntz algebras and the embeddings phi_{n,m}.
# Run: python3 demos/01_word_calculus.py

# %%
from cuntz_pentagon import AlgebraElement as E
from cuntz_pentagon import canonical_form, check_coassociativity, coproduct, phi
from cuntz_pentagon.word_algebra import level_raise, random_element, Monomial

s1, s2 = E.generator(2, 1), E.generator(2, 2)

# s_i^* s_j = delta_ij
print("s1* s2 =", s1.star * s2)
print("s2* s2 =", s2.star * s2)

# %%
# The completeness relation lets one monomial be written many ways.
# canonical_form picks one representative, so equality is decidable.
p = s1 * s1.star + s2 * s2.star
print("s1 s1* + s2 s2* ->", canonical_form(p))
print("I - s2 s2* ->", canonical_form(E.identity(2) - s2 * s2.star))
print("raise s1 s2*:", level_raise(Monomial(2, (1,), (2,))))

# %%
# phi_{n,m} splits each letter k = m(i-1) + j into s_i (x) s_j.
print("phi_{2,2}(s3) =", phi(2, 2, E.generator(4, 3)))
print("phi_{2,3}(s5) =", phi(2, 3, E.generator(6, 5)))
for (m, l), block in coproduct(E.generator(4, 1))[4].blocks.items():
    print(f"  coproduct block {(m, l)}: {block}")

# %%
# Mixed coassociativity holds exactly, with no rounding at all.
x = random_element(12, 3, 4, seed=0)
print("coassociativity residual (2,3,2):", check_coassociativity(2, 3, 2, x))

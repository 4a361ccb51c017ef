# The partial isometry W = U V^* intertwining pi_{nm} (x) I with the tensor representation.
# Run: python3 demos/03_intertwiner.py

# %%
import scipy.sparse as sp

from cuntz_pentagon import AlgebraElement as E
from cuntz_pentagon import build_U, build_W, build_space, check_coisometry, check_covariance
from cuntz_pentagon import partial_isometry_residual
from cuntz_pentagon.intertwiner import check_U_defining_property

n, m, L = 2, 2, 3
s4, s2 = build_space(4, L), build_space(2, L)

# U splits letters of a word over 1..4 into a pair of words over 1..2
u = build_U(n, m, L).tocoo()
for col in [s4.index(()), s4.index((3,)), s4.index((2, 3))]:
    row = u.row[u.col == col][0]
    print(f"U({s4.word(col)}) = {s2.word(row // s2.dim)} (x) {s2.word(row % s2.dim)}")
print("U unitary:", abs(u @ u.T - sp.identity(u.shape[0])).max() == 0)

# %%
w = build_W(n, m, L)
print("W shape", w.shape, "nnz", w.nnz)
print("|W W* W - W| =", partial_isometry_residual(w), " |W W* - I| =", check_coisometry(n, m, L))

# %%
# Covariance holds for every sequence family. "product" realises H_4 with
# g_2 [x] g_2, "canonical" with choose_unitary(z^(4)) plus a gauge correction.
x = E.monomial(4, (2, 3), (4,))
for realization in ["product", "canonical"]:
    for fam in ["basis-first", "uniform", "phase:1.0"]:
        print(f"  {realization:9s} {fam:12s} U-property {check_U_defining_property(n, m, L, fam, x, realization):.1e}"
              f"  covariance {check_covariance(n, m, L, fam, x, realization):.1e}")

# GP states, the box product of unit vectors and their GNS realisation.
# Run: python3 demos/02_states_and_gns.py

# %%
import numpy as np

from cuntz_pentagon import AlgebraElement as E
from cuntz_pentagon import Representation, box_vector, build_space, parse_family, rho, state_tensor
from cuntz_pentagon.gns_rep import choose_unitary

z = np.array([1, 1j]) / np.sqrt(2)
print("rho_z(s1 s2*) =", rho(z, E.monomial(2, (1,), (2,))))

# %%
# Tensoring states through phi_{n,m} gives the state of the box product.
uniform = parse_family("uniform")
x = E.monomial(6, (5, 2), (3,))
print("(rho (x)_phi rho)(x) =", state_tensor(uniform(2), uniform(3), x))
print("rho_{z [x] y}(x)      =", rho(box_vector(uniform(2), uniform(3)), x))

# sequences closed under the box product
for fam in ["basis-first", "basis-last", "uniform", "phase:1.0"]:
    seq = parse_family(fam)
    print(f"  {seq.id:24s} |z2 [x] z3 - z6| = {np.linalg.norm(box_vector(seq(2), seq(3)) - seq(6)):.1e}")

# %%
# The GNS space of rho_z is spanned by words not ending in 1.
space = build_space(2, 3)
print(space, space.words)

# pi_z = pi_eta o alpha_g with g z = eta
g = choose_unitary(z)
print("g z =", np.round(g @ z, 12))
rep = Representation(space, z=z)
omega = np.zeros(space.dim)
omega[0] = 1
y = E.monomial(2, (1, 2), (2,))
print("<Omega, pi(x) Omega> =", np.vdot(omega, rep(y) @ omega), " rho_z(x) =", rho(z, y))

"""
Checking the rank structure of small Hankel matrices
====================================================

Three finite-size checks. A rank-r generator satisfies a length-r
recursion. Its larger corners have kernels that grow by one per size.
The tangent space of rank-k matrices at a Hankel point, together with
all Hankel matrices, has a known dimension.
"""

import numpy as np

from exphankel.model import ExponentialModel, synthesize
from exphankel.theory import kernel_dimension_profile, tangent_rank_check, verify_recursion

rng = np.random.default_rng(1)
zeta = -0.05 + 1j * rng.uniform(-np.pi, np.pi, 3)
f = synthesize(ExponentialModel(np.ones(3, dtype=complex), zeta), 13)

lam, residual = verify_recursion(f, 3)
print("recursion residual:", residual)
print("kernel dims for corner sizes 4..7:", kernel_dimension_profile(f, 3, 6))

for n in range(2, 7):
    for k in range(1, n):
        rep = tangent_rank_check(n, k, trials=3, rng=rng)
        flag = "ok" if rep.match else "MISMATCH"
        print(f"n={n} k={k}: rank {rep.computed_rank} formula {rep.formula_rank} {flag}")

"""Mirror symmetrization diagonalizing a radial kernel in the Neumann basis.

The symmetrized kernel sum over 27 mirror images produces, mode pair by mode
pair, exactly delta_{pq} fhat(p): the off-diagonal entries cancel across the
images to rounding level while the diagonal matches the radial transform
computed by an independent 1D quadrature.

Run:  python3 demos/neumann_diagonalization.py
"""

import numpy as np

from bosegas import bump_kernel, bump_kernel_hat, verify_diagonalization

ELL, RADIUS = 4.0, 1.5

rep = verify_diagonalization(bump_kernel(RADIUS), RADIUS, ELL)
f0 = float(rep.fhat[0])

print(f"box side {ELL}, kernel support {RADIUS} (C^2 bump), "
      f"{len(rep.modes)} modes with |n| <= 3")
print(f"off-diagonal max / fhat(0): {rep.off_diagonal_max / f0:.2e}")
print(f"diagonal rel err vs 1D quadrature: {rep.diagonal_rel_err:.2e}")
print(f"node-refinement shift: {rep.richardson:.2e}")

print("\nfirst shells of the diagonal vs the closed-form bump transform:")
shown = set()
for i, mode in enumerate(rep.modes):
    shell = sum(v * v for v in mode)
    if shell in shown or shell > 4:
        continue
    shown.add(shell)
    p = np.sqrt(shell) * np.pi / ELL
    closed = float(bump_kernel_hat(p, RADIUS))
    print(f"  |n|^2 = {shell}: matrix {rep.matrix[i, i]:.10f}, "
          f"closed form {closed:.10f}")

off = rep.matrix.copy()
np.fill_diagonal(off, 0.0)
print(f"\nlargest raw off-diagonal entry: {np.abs(off).max():.3e} "
      f"(cancellation across 27 mirror images)")

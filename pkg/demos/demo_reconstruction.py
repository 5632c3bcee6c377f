"""Reconstructing a disconnected spectral support from growth limits.

Growth limits of a polynomial family bound the support inside each symbol
sublevel set; intersecting them rebuilds the support.  Distance quadratics
(symbol modulus |lam - c|^2) produce disks, and intersections of disks are
convex: they can never separate two components.  Real-coefficient squared
distances (x - c)^2 have quartic-oval sublevels, and a 16 x 16 lattice of
them carves the gap exactly.  This script reconstructs a two-box spectrum
both ways and draws the results.
"""

import numpy as np

from realpw import (make_grid, sample_builtin, forward_dft, support_mask,
                    family_quadratic, family_quadratic_real, reconstruct_support)
from realpw.verify import two_box_support

grid = make_grid(2, 256, 0.05)
dlam = grid.dlam
f = sample_builtin({"kind": "spectral_bump", "support": two_box_support(dlam),
                    "edge_width": 0.45 * dlam}, grid)
reference = support_mask(forward_dft(f))
print(f"true support: {reference.n_cells} cells in two boxes")

step = 63 * dlam / 8
centers = [np.array([a, b])
           for a in (np.arange(16) - 7) * step
           for b in (np.arange(16) - 7) * step]


def draw(mask, rows=9, cols=70):
    field = mask.field.reshape(grid.shape)
    c0 = grid.M // 2
    half_r, half_c = rows // 2, cols // 2
    for i in range(c0 - half_r, c0 + half_r + 1):
        line = "".join("#" if field[j, i] else "."
                       for j in range(c0 - half_c, c0 + half_c + 1))
        print("   " + line)


for label, family in (("distance quadratics (disks)", family_quadratic(centers, grid)),
                      ("real quadratics (quartic ovals)",
                       family_quadratic_real(centers, grid))):
    res = reconstruct_support(f, family, p=2, n_max=200,
                              reference=reference, tau=0.01)
    m = res.metrics
    print(f"\n{label}: {res.estimated.n_cells} cells, "
          f"symmetric difference {m.symmetric_difference}, "
          f"dilation distance {m.dilation_distance} cells")
    draw(res.estimated)

print("\ntrue mask for comparison:")
draw(reference)
print("\nThe disk family fills the convex hull between the boxes; the")
print("real-quadratic family recovers both components exactly.")

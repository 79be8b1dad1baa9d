"""The half-flux ground energy as an infimum over slit-pinned problems.

Pinning a zero-field ground state to vanish along a boundary-to-boundary
slit always costs at least the half-flux ground energy; minimizing over
slits recovers it.  On the symmetric annulus every radial slit attains the
minimum, and the axis-aligned ones do so exactly on the lattice (a
mirror-odd member of the degenerate pair vanishes on the axis row).
"""

import numpy as np

import fluxlab as fl

spec = fl.DomainSpec(outer=fl.Disk(0, 0, 1.0), holes=(fl.Disk(0, 0, 0.3),), spacing=0.05)
grid = fl.build_grid(spec)

half = fl.aharonov_bohm_potential(grid, [0.5])
lam_half = fl.lowest_eigenpairs(fl.assemble_magnetic(grid, half), 1, tol=1e-11).eigenvalues[0]
print("half-flux lambda1      =", lam_half)

zero = fl.zero_field(grid)
lams = []
print("\n angle   slit-pinned lambda1   excess over half flux")
for j in range(8):
    ang = 2 * np.pi * j / 8
    slit = fl.radial_slit(grid, 1, ang)
    lam = fl.lowest_eigenpairs(fl.assemble_slit(grid, zero, slit=slit), 1, tol=1e-11).eigenvalues[0]
    lams.append(lam)
    print(f" {ang:5.2f}   {lam:18.12f}   {lam - lam_half:+.3e}")

print("\nmin over slits         =", min(lams))
print("relative gap           =", abs(min(lams) - lam_half) / lam_half)
print("every slit lies above the half-flux energy:", bool(np.min(lams) >= lam_half - 1e-10))

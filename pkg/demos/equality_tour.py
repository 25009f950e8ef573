"""Build a DDVV equality submanifold from a holomorphic curve and inspect it.

Run from the repository root:

    python3 demos/equality_tour.py [output-dir]

Prints the curvature quantities at a handful of chart points, checks the
normal form of the shape operators, and writes a slice of the
submanifold (fixed fiber angle, first three coordinates) as OBJ.
"""

import sys
from pathlib import Path

import numpy as np

from ddvv_forge import (ChartPoint, GridSpec, builtin, canonical_frame, check_isotropy,
                        ddvv_residual, fundamental_forms, phi_jets, sample_grid, shape_operator)

curve = builtin("helicoid-pair")
print("curve:", ", ".join(curve.texts()))

zs = [complex(u, v) for u in np.linspace(0.2, 0.9, 5) for v in np.linspace(0.1, 0.6, 5)]
iso = check_isotropy(curve, zs)
print(f"isotropy: max |<<G',G'>>| = {iso.max_isotropy:.2e}, min |G'| = {iso.min_speed:.3f}")

print(f"\n{'u':>6} {'v':>6} {'theta':>6} {'s':>12} {'|H|^2':>12} {'s_N':>12} {'residual':>10}")
for p in sample_grid(GridSpec(3, (0.2, 0.9), (0.1, 0.6), 3, 2, (3,))):
    sd = fundamental_forms(phi_jets(curve, p))
    rep = ddvv_residual(sd)
    print(f"{p.u:6.2f} {p.v:6.2f} {p.theta[0]:6.2f} {rep.s:12.6f} {rep.H2:12.6f} {rep.sN:12.6f} "
          f"{rep.residual:10.1e}")

# The shape operators in the recovered frame: A_eta = lam I + mu (E12 + E21),
# A_zeta = mu diag(1, -1, 0).
p = ChartPoint(0.5, 0.3, (1.0,), 3)
sd = fundamental_forms(phi_jets(curve, p))
cf = canonical_frame(sd)
E = cf.basis
np.set_printoptions(precision=5, suppress=True)
print(f"\nat {p}: lam = {cf.lam:.5f}, mu = {cf.mu:.5f}")
print("A_eta in the canonical basis:\n", E.T @ shape_operator(sd, cf.eta) @ E)
print("A_zeta in the canonical basis:\n", E.T @ shape_operator(sd, cf.zeta) @ E)

out = Path(sys.argv[1] if len(sys.argv) > 1 else ".")
out.mkdir(parents=True, exist_ok=True)
us, vs = np.linspace(0.2, 0.9, 30), np.linspace(0.1, 0.6, 20)
verts = [phi_jets(curve, ChartPoint(u, v, (1.0,), 3)).phi.val[:3] for u in us for v in vs]
faces = []
for i in range(len(us) - 1):
    for j in range(len(vs) - 1):
        a, b = i * len(vs) + j + 1, (i + 1) * len(vs) + j + 1
        faces += [(a, b, b + 1), (a, b + 1, a + 1)]
path = out / "helicoid_pair_slice.obj"
path.write_text("".join(f"v {x:.9g} {y:.9g} {z:.9g}\n" for x, y, z in verts)
                + "".join(f"f {a} {b} {c}\n" for a, b, c in faces))
print(f"\nwrote {len(verts)} vertices to {path}")

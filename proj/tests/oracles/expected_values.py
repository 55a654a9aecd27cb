#!/usr/bin/env python3
"""Independent evaluations used to freeze expected values in the C++ tests.

Nothing here imports or calls the C++ code; each value is computed from the
closed-form definition or by brute force.
"""
import math
import numpy as np

print("== cell_index")
nx, ny, nz = 60, 220, 85
print("last cell", 59 + nx * (219 + ny * 84))
small = [(i, j, k) for k in range(5) for j in range(4) for i in range(3)]
assert all(i + 3 * (j + 4 * k) == n for n, (i, j, k) in enumerate(small))

print("== harmonic transmissibility")
ta, tb = 100 * 100 / 10, 300 * 100 / 10
print("hetero", 2 / (1 / ta + 1 / tb))

print("== peaceman")
kx, ky, dx, dy, dz, rw, skin = 100.0, 400.0, 20.0, 20.0, 10.0, 0.25, 0.0
re = 0.28 * math.sqrt(math.sqrt(ky / kx) * dx**2 + math.sqrt(kx / ky) * dy**2) / (
    (ky / kx) ** 0.25 + (kx / ky) ** 0.25)
wi = 2 * math.pi * math.sqrt(kx * ky) * dz / (math.log(re / rw) + skin)
print("re", repr(re), "wi", repr(wi))

def interp(xs, ys, x):
    if x <= xs[0]:
        return ys[0]
    if x >= xs[-1]:
        return ys[-1]
    for a, b, ya, yb in zip(xs, xs[1:], ys, ys[1:]):
        if a <= x <= b:
            return ya + (yb - ya) * (x - a) / (b - a)

swof = np.array([
    [0.12, 0.0, 1.0], [0.2, 0.005, 0.8], [0.3, 0.02, 0.55], [0.4, 0.05, 0.35],
    [0.5, 0.1, 0.2], [0.6, 0.175, 0.1], [0.7, 0.28, 0.04], [0.8, 0.42, 0.01],
    [0.9, 0.6, 0.0], [1.0, 1.0, 0.0]])
sgof = np.array([
    [0.0, 0.0, 1.0], [0.001, 0.0, 1.0], [0.02, 0.0, 0.997], [0.05, 0.005, 0.98],
    [0.12, 0.025, 0.7], [0.2, 0.075, 0.35], [0.25, 0.125, 0.2], [0.3, 0.19, 0.09],
    [0.4, 0.41, 0.021], [0.45, 0.6, 0.01], [0.5, 0.72, 0.001], [0.6, 0.87, 0.0001],
    [0.7, 0.94, 0.0], [0.85, 0.98, 0.0], [1.0, 1.0, 0.0]])

def stone2(sw, sg):
    krw = interp(swof[:, 0], swof[:, 1], sw)
    krow = interp(swof[:, 0], swof[:, 2], sw)
    krg = interp(sgof[:, 0], sgof[:, 1], sg)
    krog = interp(sgof[:, 0], sgof[:, 2], sg)
    krocw = interp(swof[:, 0], swof[:, 2], swof[0, 0])
    v = krocw * ((krow / krocw + krw) * (krog / krocw + krg) - krw - krg)
    return max(v, 0.0)

print("== stone II")
print("(0.3,0.2)", repr(stone2(0.3, 0.2)))
print("(0.35,0.15)", repr(stone2(0.35, 0.15)))

print("== black-oil oil density")
pvto = np.array([
    [14.7, 0.001, 1.062, 1.04], [264.7, 0.0905, 1.15, 0.975], [514.7, 0.18, 1.207, 0.91],
    [1014.7, 0.371, 1.295, 0.83], [2014.7, 0.636, 1.435, 0.695], [2514.7, 0.775, 1.5, 0.641],
    [3014.7, 0.93, 1.565, 0.594], [4014.7, 1.270, 1.695, 0.51], [5014.7, 1.618, 1.827, 0.449],
    [9014.7, 2.984, 2.357, 0.203]])
rho_o_ref, rho_g_ref, c_o = 49.1, 0.06054, 1.37e-5
ft3_per_bbl = 5.614583
def oil_density(po, pb):
    rs = interp(pvto[:, 0], pvto[:, 1], pb)
    bo = interp(pvto[:, 0], pvto[:, 2], pb) * (1 - c_o * (po - pb))
    rho_oo = rho_o_ref / bo
    rho_og = rs * 1000.0 * rho_g_ref / (ft3_per_bbl * bo)
    return rho_oo, rho_og, rho_oo + rho_og
print("saturated 2264.7", [repr(v) for v in oil_density(2264.7, 2264.7)])
print("undersat (3500, 2264.7)", [repr(v) for v in oil_density(3500.0, 2264.7)])

print("== accumulation hand value")
print("water term", 0.2 * 1000 * 62.4 * 0.1 / 1.0)

print("== darcy two-cell flux")
C = 0.001127 * ft3_per_bbl
T = 2 / (1 / (100 * 100 / 10) + 1 / (100 * 100 / 10))
krw_up = ((0.5 - 0.2) / 0.6) ** 2
print("water mass flux", repr(C * T * krw_up * 62.4 / 0.5 * 100.0))

print("== perforation rate hand value")
# producer: WI = 50 md ft, lambda = kr rho / mu with kr 0.25, rho 62.4, mu 0.3
print("rate", repr(C * 50.0 * 0.25 * 62.4 / 0.3 * (4000.0 - 6000.0)))

print("== Welge front for unit mobility ratio Corey n=2, swc=sor=0.2")
swc, sor = 0.2, 0.2
def frac(s):
    S = (s - swc) / (1 - swc - sor)
    S = min(max(S, 0.0), 1.0)
    return S * S / (S * S + (1 - S) ** 2)
# brute-force tangent search: maximize f(s)/(s - swc)
grid = np.linspace(swc + 1e-6, 1 - sor, 2_000_001)
ratio = np.array([frac(s) for s in grid[::100]]) / (grid[::100] - swc)
i = int(np.argmax(ratio))
lo, hi = grid[::100][max(i - 1, 0)], grid[::100][min(i + 1, len(grid[::100]) - 1)]
fine = np.linspace(lo, hi, 200001)
r = np.array([frac(s) for s in fine]) / (fine - swc)
sf = fine[int(np.argmax(r))]
slope = frac(sf) / (sf - swc)
print("shock saturation", repr(sf), "front x/L at 0.3 PVI", repr(0.3 * slope))

print("== partition")
print(1122000 / 16)

print("== smoothed aggregation V(1,1), weighted Jacobi 0.8, 1D Poisson 64 cells")
def sa_levels(A, coarse):
    levels = []
    while A.shape[0] > coarse:
        n = A.shape[0]
        nb = [[j for j in range(n) if j != i and A[i, j] != 0 and
               abs(A[i, j]) >= 0.08 * math.sqrt(abs(A[i, i] * A[j, j]))] for i in range(n)]
        agg = -np.ones(n, int)
        c = 0
        for i in range(n):
            if agg[i] < 0 and all(agg[j] < 0 for j in nb[i]):
                agg[i] = c
                agg[nb[i]] = c
                c += 1
        first = agg.copy()
        for i in range(n):
            if agg[i] < 0:
                for j in nb[i]:
                    if first[j] >= 0:
                        agg[i] = first[j]
                        break
        for i in range(n):
            if agg[i] < 0:
                agg[i] = c
                for j in nb[i]:
                    if agg[j] < 0:
                        agg[j] = c
                c += 1
        T = np.zeros((n, c))
        T[np.arange(n), agg] = 1
        D = np.diag(A)
        rho = max(np.abs(A).sum(1) / np.abs(D))
        P = T - (4 / 3 / rho) * (A / D[:, None]) @ T
        levels.append((A, P))
        A = P.T @ A @ P
    levels.append((A, None))
    return levels

def vcycle(L, l, r, w=0.8):
    A, P = L[l]
    if P is None:
        return np.linalg.solve(A, r)
    D = np.diag(A)
    z = w * r / D
    z = z + P @ vcycle(L, l + 1, P.T @ (r - A @ z), w)
    return z + w * (r - A @ z) / D

n = 64
A = 2 * np.eye(n) - np.eye(n, k=1) - np.eye(n, k=-1)
L = sa_levels(A, 4)
E = np.eye(n) - np.column_stack([vcycle(L, 0, A[:, i]) for i in range(n)])
print("level sizes", [lv[0].shape[0] for lv in L],
      "error propagator spectral radius", repr(max(abs(np.linalg.eigvals(E)))))

print("== one-cell implicit step (high precision)")
import mpmath as mp
mp.mp.dps = 40
V = mp.mpf(100) * 100 * 10
phi0, cw, co, cr, pref = mp.mpf("0.2"), mp.mpf("3e-6"), mp.mpf("1e-5"), mp.mpf("1e-6"), mp.mpf("14.7")
muw, muo, rhow, rhoo = mp.mpf("0.3"), mp.mpf(3), mp.mpf("62.4"), mp.mpf(53)
darcy = mp.mpf("0.001127") * mp.mpf("5.614583")
re1 = mp.mpf("0.28") * mp.sqrt(100**2 + 100**2) / 2
wi1 = 2 * mp.pi * 100 * 10 / mp.log(re1 / mp.mpf("0.25"))
ph = mp.mpf(3000)

def kr(s):
    sn = (s - mp.mpf("0.2")) / mp.mpf("0.6")
    return sn**2, (1 - sn)**2

def masses(p, s):
    phi = phi0 * (1 + cr * (p - pref))
    return (phi * V * rhoo * (1 + co * (p - pref)) * (1 - s),
            phi * V * rhow * (1 + cw * (p - pref)) * s)

old = masses(mp.mpf(4000), mp.mpf("0.3"))

def residual(p, s):
    krw, kro = kr(s)
    mo, mw = masses(p, s)
    qo = darcy * wi1 * rhoo * (1 + co * (p - pref)) * kro / muo * (ph - p)
    qw = darcy * wi1 * rhow * (1 + cw * (p - pref)) * krw / muw * (ph - p)
    return [(mo - old[0]) - qo, (mw - old[1]) - qw]

sol = mp.findroot(lambda p, s: residual(p, s), (mp.mpf(3900), mp.mpf("0.3")))
print("p*", mp.nstr(sol[0], 25), "s_w*", mp.nstr(sol[1], 25))

# Prototype: NPW window, B_j, rho_tilde, variance_exact, c2/c3 -> convergence check
import numpy as np
from scipy.integrate import quad
from scipy.interpolate import CubicSpline
import math, time

# ---- bump psi via panel GL
_gl_x, _gl_w = np.polynomial.legendre.leggauss(16)
def _bump(s):
    s = np.asarray(s, float)
    out = np.zeros_like(s)
    m = np.abs(s) < 1.0
    out[m] = np.exp(-1.0/(1.0 - s[m]**2))
    return out
# cumulative integral of bump from -1 to u, composite GL on [-1,u] with fixed panels
def _bump_integral(u):
    # panels from -1 to u, 64 panels
    if u <= -1: return 0.0
    edges = np.linspace(-1.0, u, 65)
    mid = 0.5*(edges[:-1]+edges[1:]); half = 0.5*(edges[1]-edges[0])
    nodes = mid[:,None] + half*_gl_x[None,:]
    return float(np.sum(_bump(nodes)*_gl_w[None,:])*half)
_total = _bump_integral(1.0)
def psi(u):
    if u <= -1: return 0.0
    if u >= 1: return 1.0
    return _bump_integral(u)/_total
def phi_fn(t):
    if t <= 0.5: return 1.0
    if t >= 1.0: return 0.0
    return psi(3.0 - 4.0*t)
def b2_direct(x):
    if x <= 0.5 or x >= 2.0: return 0.0
    return max(phi_fn(x/2) - phi_fn(x), 0.0)

# spline cache of b on [0.5, 2]
grid = np.linspace(0.5, 2.0, 4097)
bvals = np.array([math.sqrt(b2_direct(x)) for x in grid])
_bspl = CubicSpline(grid, bvals)
def b_window(x):
    x = np.asarray(x, float)
    out = np.zeros_like(x)
    m = (x > 0.5) & (x < 2.0)
    out[m] = _bspl(x[m])
    return out

# partition of unity
ells = np.arange(3, 4097)
s = np.zeros(len(ells))
for j in range(1, 15):
    s += b_window(ells/2.0**j)**2
print("partition of unity max err:", np.abs(s-1).max())

ALPHA = 3.0
def C_ell(ls): return np.asarray(ls, float)**(-ALPHA)

def band(j):
    ls = np.arange(2**(j-1), 2**(j+1)+1)
    w = b_window(ls/2.0**j)**2 * C_ell(ls) * (2*ls+1)/(4*np.pi)
    Bj = math.fsum(w)
    return ls, w, Bj

def rho_tilde_pows(j, t, qmax):
    # rho(t) then powers
    ls, w, Bj = band(j)
    lmax = ls[-1]
    acc = np.zeros_like(t)
    Pm1 = np.ones_like(t); P0 = t.copy()
    wmap = {int(l): wi for l, wi in zip(ls, w)}
    if 0 in wmap: acc += wmap[0]*Pm1
    if 1 in wmap: acc += wmap[1]*P0
    for l in range(2, lmax+1):
        P1 = ((2*l-1)*t*P0 - (l-1)*Pm1)/l
        Pm1, P0 = P0, P1
        if l >= ls[0]:
            acc += wmap[int(l)]*P1
    return acc/Bj

def variance_exact(j, q):
    n = (q*2**(j+1))//2 + 2
    t, w = np.polynomial.legendre.leggauss(n)
    r = rho_tilde_pows(j, t, q)
    return 8*np.pi**2*math.factorial(q)*float(np.sum(w*r**q))

# c2
I2 = quad(lambda x: b_window(np.array([x]))[0]**2 * x**(1-ALPHA), 0.5, 2, epsabs=1e-13, epsrel=1e-12)[0]
I4 = quad(lambda x: b_window(np.array([x]))[0]**4 * x**(1-2*ALPHA), 0.5, 2, epsabs=1e-13, epsrel=1e-12)[0]
c2 = 8*np.pi**2*I4/I2**2
print("I2:", I2, "c2:", c2)
for j in range(5, 13):
    t0=time.time(); v = variance_exact(j, 2)
    print(f"q=2 j={j}: 2^2j var/2! = {4.0**j*v/2:.8f}  ratio={4.0**j*v/2/c2:.6f}  ({time.time()-t0:.2f}s)")

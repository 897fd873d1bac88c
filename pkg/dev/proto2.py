# c3 (triangle-kernel 3D), c4 (factorized through K(y)), c5 (via T(psi)); compare to finite-j
import numpy as np
from scipy.integrate import quad
from scipy.interpolate import CubicSpline
import math, time
exec(open('dev/proto.py').read().split("# partition of unity")[0])  # reuse window setup

ALPHA = 3.0
def C_ell(ls): return np.asarray(ls, float)**(-ALPHA)
def band(j):
    ls = np.arange(2**(j-1), 2**(j+1)+1)
    w = b_window(ls/2.0**j)**2 * C_ell(ls) * (2*ls+1)/(4*np.pi)
    return ls, w, math.fsum(w)
def rho_tilde_at(j, t):
    ls, w, Bj = band(j)
    lmax = int(ls[-1]); l0 = int(ls[0])
    acc = np.zeros_like(t)
    Pm1 = np.ones_like(t); P0 = t.copy()
    for l in range(2, lmax+1):
        P1 = ((2*l-1)*t*P0 - (l-1)*Pm1)/l
        Pm1, P0 = P0, P1
        if l >= l0:
            acc += w[l-l0]*P1
    return acc/Bj
def variance_exact(j, q):
    n = (q*2**(j+1))//2 + 2
    t, w = np.polynomial.legendre.leggauss(n)
    r = rho_tilde_at(j, t)
    return 8*np.pi**2*math.factorial(q)*float(np.sum(w*r**q))

I2 = quad(lambda x: float(b_window(np.array([x]))**2) * x**(1-ALPHA), 0.5, 2, epsabs=1e-13, epsrel=1e-12)[0]

gx32, gw32 = np.polynomial.legendre.leggauss(32)

def inner_x3(x1, x2):
    """integral over x3 of b^2(x3) x3^(1-a) / sqrt(f1 f2 f3 f0), vectorized over flat arrays x1,x2."""
    lo = np.maximum(0.5, np.abs(x1-x2))
    hi = np.minimum(2.0, x1+x2)
    mid = 0.5*(lo+hi)
    res = np.zeros_like(x1)
    # left piece [lo, mid]: singular iff lo == |x1-x2| (up to fp) and lo > ~0.5
    sing_lo = np.abs(x1-x2) >= 0.5
    # substitution x3 = lo + u^2, u in [0, sqrt(mid-lo)]; vanishing factor (x3 - |x1-x2|) = u^2
    umax = np.sqrt(mid - lo)
    u = 0.5*umax[:,None]*(gx32[None,:]+1.0)          # (n,32)
    du = 0.5*umax
    x3 = lo[:,None] + u**2
    f0 = x1[:,None]+x2[:,None]+x3
    # other two factors: f_hi = x1+x2-x3 ; f_other = (x3 + |x1-x2|) when sing; else both (x1-x2+x3)(x2-x1+x3)
    fhi = x1[:,None]+x2[:,None]-x3
    g = b_window(x3)**2 * x3**(1-ALPHA)
    other = np.where(sing_lo[:,None], x3 + np.abs(x1-x2)[:,None], (x3+x1[:,None]-x2[:,None])*(x3-x1[:,None]+x2[:,None])/np.maximum(x3-lo[:,None],1e-300))
    # careful: when not singular, integrand = g / sqrt((x3-l)(x3+l) f0 fhi) with l=|x1-x2| <= 0.5 <= lo, no cancellation:
    val_sing = 2.0*g/np.sqrt((x3+np.abs(x1-x2)[:,None])*f0*fhi)      # * du already has u absorbed: dx3 = 2u du; 1/sqrt(u^2 * rest)*2u du = 2/sqrt(rest) du
    # non-singular left: plain GL in x3 over [lo, mid]
    x3p = lo[:,None] + (mid-lo)[:,None]*0.5*(gx32[None,:]+1.0)
    gp = b_window(x3p)**2 * x3p**(1-ALPHA)
    f1p = x1[:,None]+x2[:,None]-x3p; f2p = x1[:,None]-x2[:,None]+x3p; f3p = -x1[:,None]+x2[:,None]+x3p; f0p = x1[:,None]+x2[:,None]+x3p
    val_plain = gp/np.sqrt(np.maximum(f1p*f2p*f3p*f0p, 1e-300))
    left = np.where(sing_lo, np.sum(val_sing*gw32[None,:],axis=1)*du, np.sum(val_plain*gw32[None,:],axis=1)*0.5*(mid-lo))
    # right piece [mid, hi]: singular iff hi == x1+x2 i.e. x1+x2 <= 2
    sing_hi = (x1+x2) <= 2.0
    umaxr = np.sqrt(hi-mid)
    ur = 0.5*umaxr[:,None]*(gx32[None,:]+1.0)
    x3r = hi[:,None] - ur**2
    f2r = x1[:,None]-x2[:,None]+x3r; f3r = -x1[:,None]+x2[:,None]+x3r; f0r = x1[:,None]+x2[:,None]+x3r
    gr = b_window(x3r)**2*x3r**(1-ALPHA)
    val_sr = 2.0*gr/np.sqrt(np.maximum(f2r*f3r*f0r,1e-300))
    # plain right
    x3q = mid[:,None] + (hi-mid)[:,None]*0.5*(gx32[None,:]+1.0)
    gq = b_window(x3q)**2*x3q**(1-ALPHA)
    f1q = x1[:,None]+x2[:,None]-x3q; f2q = x1[:,None]-x2[:,None]+x3q; f3q = -x1[:,None]+x2[:,None]+x3q; f0q = x1[:,None]+x2[:,None]+x3q
    val_pq = gq/np.sqrt(np.maximum(f1q*f2q*f3q*f0q,1e-300))
    right = np.where(sing_hi, np.sum(val_sr*gw32[None,:],axis=1)*umaxr*0.5, np.sum(val_pq*gw32[None,:],axis=1)*0.5*(hi-mid))
    return left + right

def c3_compute(npan=6, ng=12):
    gx, gw = np.polynomial.legendre.leggauss(ng)
    edges = np.linspace(0.5, 2.0, npan+1)
    tot = 0.0
    for i in range(npan):
        for k in range(npan):
            a1,b1 = edges[i],edges[i+1]; a2,b2=edges[k],edges[k+1]
            X1 = 0.5*(a1+b1)+0.5*(b1-a1)*gx; X2 = 0.5*(a2+b2)+0.5*(b2-a2)*gx
            XX1, XX2 = np.meshgrid(X1, X2, indexing='ij')
            flat1, flat2 = XX1.ravel(), XX2.ravel()
            inner = inner_x3(flat1, flat2)
            f = b_window(flat1)**2*flat1**(1-ALPHA)*b_window(flat2)**2*flat2**(1-ALPHA)*inner
            W = np.outer(gw, gw).ravel()*(0.25*(b1-a1)*(b2-a2))
            tot += float(np.sum(f*W))
    return 16*np.pi/I2**3 * tot

t0=time.time(); c3a = c3_compute(6,12); c3b = c3_compute(9,14)
print("c3:", c3a, c3b, "reldiff:", abs(c3a-c3b)/c3b, f"({time.time()-t0:.1f}s)")
for j in (5,6,7,8,9,10):
    v = variance_exact(j,3)
    print(f"q=3 j={j}: scaled={4.0**j*v/6:.6f} ratio={4.0**j*v/6/c3b:.6f}")

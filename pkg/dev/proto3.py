import numpy as np
from scipy.integrate import quad
from scipy.interpolate import CubicSpline
from scipy.special import j0 as sj0
import math, time
exec(open('dev/proto.py').read().split("# partition of unity")[0])

ALPHA = 3.0
def C_ell(ls): return np.asarray(ls, float)**(-ALPHA)
def band(j):
    ls = np.arange(2**(j-1), 2**(j+1)+1)
    w = b_window(ls/2.0**j)**2 * C_ell(ls) * (2*ls+1)/(4*np.pi)
    return ls, w, math.fsum(w)
def rho_tilde_at(j, t):
    ls, w, Bj = band(j)
    lmax = int(ls[-1]); l0 = int(ls[0])
    acc = np.zeros_like(t); Pm1 = np.ones_like(t); P0 = t.copy()
    for l in range(2, lmax+1):
        P1 = ((2*l-1)*t*P0 - (l-1)*Pm1)/l
        Pm1, P0 = P0, P1
        if l >= l0: acc += w[l-l0]*P1
    return acc/Bj
def variance_exact(j, q):
    n = (q*2**(j+1))//2 + 2
    t, w = np.polynomial.legendre.leggauss(n)
    return 8*np.pi**2*math.factorial(q)*float(np.sum(w*rho_tilde_at(j,t)**q))
I2 = quad(lambda x: b_window(np.atleast_1d(x))[0]**2 * x**(1-ALPHA), 0.5, 2, epsabs=1e-13, epsrel=1e-12)[0]

gx32, gw32 = np.polynomial.legendre.leggauss(32)

def K_of_y(y, npan=8, ng=10):
    """K(y) = int over box cap triangle of b2(x1)x1^(1-a) b2(x2)x2^(1-a) / sqrt(prod) dx1 dx2"""
    gx, gw = np.polynomial.legendre.leggauss(ng)
    edges = np.linspace(0.5, 2.0, npan+1)
    tot = 0.0
    for i in range(npan):
        a1, b1 = edges[i], edges[i+1]
        X1 = 0.5*(a1+b1) + 0.5*(b1-a1)*gx
        W1 = gw*0.5*(b1-a1)
        lo = np.maximum(0.5, np.abs(X1 - y))
        hi = np.minimum(2.0, X1 + y)
        m = lo < hi
        if not m.any(): continue
        x1 = X1[m]; w1 = W1[m]; lo = lo[m]; hi = hi[m]
        mid = 0.5*(lo+hi)
        # left: singular if |x1-y| > 0.5 (triangle line binds); vanishing factor:
        #   if x1 > y: x2=x1-y -> (-x1+x2+y)=u^2 ; others: (x1-x2+y)(x1+x2-y)(x1+x2+y)
        #   if x1 < y: x2=y-x1 -> (x1+x2-y)=u^2 ; others: (-x1+x2+y)(x1-x2+y)(x1+x2+y)
        sing_lo = np.abs(x1-y) > 0.5
        um = np.sqrt(mid-lo)
        u = 0.5*um[:,None]*(gx32[None,:]+1.0)
        x2 = lo[:,None] + u*u
        g2 = b_window(x2)**2 * x2**(1-ALPHA)
        fA = -x1[:,None]+x2+y; fB = x1[:,None]-x2+y; fC = x1[:,None]+x2-y; fD = x1[:,None]+x2+y
        rest = np.where((x1 > y)[:,None], fB*fC*fD, fA*fB*fD)
        val_s = 2.0*g2/np.sqrt(np.maximum(rest,1e-300))
        left_s = np.sum(val_s*gw32[None,:],axis=1)*0.5*um
        # plain left
        x2p = lo[:,None] + (mid-lo)[:,None]*0.5*(gx32[None,:]+1.0)
        g2p = b_window(x2p)**2*x2p**(1-ALPHA)
        fAp = -x1[:,None]+x2p+y; fBp = x1[:,None]-x2p+y; fCp = x1[:,None]+x2p-y; fDp = x1[:,None]+x2p+y
        val_p = g2p/np.sqrt(np.maximum(fAp*fBp*fCp*fDp,1e-300))
        left_p = np.sum(val_p*gw32[None,:],axis=1)*0.5*(mid-lo)
        left = np.where(sing_lo, left_s, left_p)
        # right: singular if x1+y < 2 (x2=x1+y binds): (x1-x2+y)=u^2; others (-x1+x2+y)(x1+x2-y)(x1+x2+y)
        sing_hi = (x1+y) < 2.0
        umr = np.sqrt(hi-mid)
        ur = 0.5*umr[:,None]*(gx32[None,:]+1.0)
        x2r = hi[:,None] - ur*ur
        g2r = b_window(x2r)**2*x2r**(1-ALPHA)
        fAr = -x1[:,None]+x2r+y; fCr = x1[:,None]+x2r-y; fDr = x1[:,None]+x2r+y
        val_sr = 2.0*g2r/np.sqrt(np.maximum(fAr*fCr*fDr,1e-300))
        right_s = np.sum(val_sr*gw32[None,:],axis=1)*0.5*umr
        x2q = mid[:,None] + (hi-mid)[:,None]*0.5*(gx32[None,:]+1.0)
        g2q = b_window(x2q)**2*x2q**(1-ALPHA)
        fAq = -x1[:,None]+x2q+y; fBq = x1[:,None]-x2q+y; fCq = x1[:,None]+x2q-y; fDq = x1[:,None]+x2q+y
        val_pq = g2q/np.sqrt(np.maximum(fAq*fBq*fCq*fDq,1e-300))
        right_p = np.sum(val_pq*gw32[None,:],axis=1)*0.5*(hi-mid)
        right = np.where(sing_hi, right_s, right_p)
        tot += float(np.sum(w1*b_window(x1)**2*x1**(1-ALPHA)*(left+right)))
    return tot

def c4_compute(ny=16, ngy=12, npan=8, ng=10):
    gx, gw = np.polynomial.legendre.leggauss(ngy)
    edges = np.linspace(0.0, 4.0, ny+1)
    tot = 0.0
    for i in range(ny):
        a, b = edges[i], edges[i+1]
        Y = 0.5*(a+b)+0.5*(b-a)*gx
        for yk, wk in zip(Y, gw*0.5*(b-a)):
            K = K_of_y(yk, npan, ng)
            tot += wk*yk*K*K
    return 32.0/I2**4 * tot

t0=time.time()
c4a = c4_compute(12, 8, 6, 8)
c4b = c4_compute(16, 12, 8, 10)
print("c4:", c4a, c4b, "reldiff:", abs(c4a-c4b)/c4b, f"({time.time()-t0:.0f}s)")
for j in (5,6,7,8,9):
    v = variance_exact(j,4)
    print(f"q=4 j={j}: scaled={4.0**j*v/24:.6f} ratio={4.0**j*v/24/c4b:.6f}")

# ---- c5 via T(psi)
def T_of(psis, ng=64):
    gx, gw = np.polynomial.legendre.leggauss(ng)
    out = np.empty_like(psis)
    for i, p in enumerate(psis):
        # panels to resolve oscillation: period 2pi/p in x; interval 1.5 wide
        npan = max(1, int(np.ceil(1.5*p/(2*np.pi)))*2)
        edges = np.linspace(0.5, 2.0, npan+1)
        acc = 0.0
        for k in range(npan):
            a, b = edges[k], edges[k+1]
            X = 0.5*(a+b)+0.5*(b-a)*gx
            acc += 0.5*(b-a)*float(np.sum(gw*b_window(X)**2*X**(1-ALPHA)*sj0(X*p)))
        out[i] = acc
    return out

def c5_compute(qq=5, Psi=400.0, pan_w=np.pi/2, ng=16):
    gx, gw = np.polynomial.legendre.leggauss(ng)
    npan = int(np.ceil(Psi/pan_w))
    tot = 0.0; last = 0.0
    for k in range(npan):
        a, b = k*pan_w, (k+1)*pan_w
        P = 0.5*(a+b)+0.5*(b-a)*gx
        T = T_of(P)
        last = 0.5*(b-a)*float(np.sum(gw*T**qq*P))
        tot += last
    return 8*np.pi**2/I2**qq * tot, last

t0=time.time()
c5, last = c5_compute()
print("c5:", c5, "last panel:", last, f"({time.time()-t0:.0f}s)")
for j in (5,6,7,8):
    v = variance_exact(j,5)
    print(f"q=5 j={j}: scaled={4.0**j*v/120:.6f} ratio={4.0**j*v/120/c5:.6f}")
# check T decay
for p in (10, 40, 100, 200, 400):
    print("T(%g) = %.3e" % (p, T_of(np.array([float(p)]))[0]))

import numpy as np
from scipy.interpolate import CubicSpline
import math, time
exec(open('dev/proto.py').read().split("# partition of unity")[0])

ALPHA = 3.0
def C_ell(ls): return np.asarray(ls, float)**(-ALPHA)
def band(j):
    ls = np.arange(2**(j-1), 2**(j+1)+1)
    w = b_window(ls/2.0**j)**2 * C_ell(ls)*(2*ls+1)/(4*np.pi)
    return ls, w, math.fsum(w)

def norm_plm_table(lmax, m, x):
    """normalized assoc Legendre S_{l m}(x) for l = m..lmax, incl. 1/sqrt(4pi); x array"""
    nx = len(x)
    out = np.zeros((lmax - m + 1, nx))
    sint = np.sqrt(np.maximum(0.0, 1.0 - x*x))
    # S_mm
    S = np.full(nx, 1.0/np.sqrt(4.0*np.pi))
    for mu in range(1, m+1):
        S = -np.sqrt((2*mu+1.0)/(2.0*mu))*sint*S
    out[0] = S
    if lmax == m: return out
    Sprev = S
    S = np.sqrt(2.0*m+3.0)*x*S
    out[1] = S
    for l in range(m+2, lmax+1):
        a = np.sqrt((4.0*l*l-1.0)/(l*l-m*m))
        bb = np.sqrt(((2.0*l+1.0)*((l-1.0)**2-m*m))/((2.0*l-3.0)*(l*l-m*m)))
        S, Sprev = a*x*S - bb*Sprev, S
        out[l-m] = S
    return out

def sphere_rule(d):
    ntheta = (d+1+1)//2
    x, wt = np.polynomial.legendre.leggauss(ntheta)
    nphi = d+1
    phis = 2*np.pi*np.arange(nphi)/nphi
    return x, wt*(2*np.pi/nphi), phis

def sample_alm(j, seed, rep):
    ls, _, _ = band(j)
    alm = {}
    for l in ls:
        rng = np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(rep, int(l))))
        cl = float(l)**(-ALPHA)
        a = np.zeros(l+1, complex)
        a[0] = rng.normal(0.0, np.sqrt(cl))
        if l >= 1:
            re = rng.normal(0.0, np.sqrt(cl/2), l)
            im = rng.normal(0.0, np.sqrt(cl/2), l)
            a[1:] = re + 1j*im
        alm[int(l)] = a
    return alm

def synth(j, alm, qmax):
    ls, wband, Bj = band(j)
    lmax = int(ls[-1]); l0 = int(ls[0])
    d = qmax*2**(j+1)
    x, w, phis = sphere_rule(d)
    bfac = b_window(ls/2.0**j)
    G = np.zeros((lmax+1, len(x)), complex)
    for m in range(0, lmax+1):
        tab = norm_plm_table(lmax, m, x)   # l=m..lmax
        for l in ls:
            if l < m: continue
            G[m] += bfac[l-l0]*alm[int(l)][m]*tab[l-m]
    E = np.exp(1j*np.outer(np.arange(lmax+1), phis))
    assert np.max(np.abs(G[0].imag)) < 1e-12
    vals = G[0].real[:,None]*np.ones(len(phis))[None,:] + 2.0*np.real(G[1:].T @ E[1:])
    return vals/np.sqrt(Bj), x, w, phis, Bj

def nu_q(vals, w, q):
    # probabilists Hermite
    H = {0: np.ones_like(vals), 1: vals}
    for k in range(1, q):
        H[k+1] = vals*H[k] - k*H[k-1]
    ring = H[q].sum(axis=1)
    return float(np.sum(w*ring))

j = 4
t0=time.time()
rels = []
nus = []
for rep in range(30):
    alm = sample_alm(j, 12345, rep)
    vals, x, w, phis, Bj = synth(j, alm, 2)
    v2 = nu_q(vals, w, 2)
    # Parseval oracle
    ls, wband, _ = band(j)
    oracle = 0.0
    for l in ls:
        a = alm[int(l)]
        cl = float(l)**(-ALPHA)
        S = (abs(a[0])**2 + 2*np.sum(np.abs(a[1:])**2))/cl
        wl = b_window(l/2.0**j)**2*cl/Bj
        oracle += wl*(S - (2*l+1))
    rels.append(abs(v2-oracle)/max(abs(oracle),1e-30))
    nus.append(v2)
print("j=4 q=2 parseval max rel gap over 30 reps:", max(rels), f"({time.time()-t0:.1f}s)")

# quick MC variance check (small R) vs exact (reuse proto formulas via C&P)
def rho_tilde_at(j, t):
    ls, wb, Bj = band(j)
    lmax = int(ls[-1]); l0 = int(ls[0])
    acc = np.zeros_like(t); Pm1 = np.ones_like(t); P0 = t.copy()
    for l in range(2, lmax+1):
        P1 = ((2*l-1)*t*P0 - (l-1)*Pm1)/l
        Pm1, P0 = P0, P1
        if l >= l0: acc += wb[l-l0]*P1
    return acc/Bj
def variance_exact(j, q):
    n = (q*2**(j+1))//2 + 2
    t, w = np.polynomial.legendre.leggauss(n)
    return 8*np.pi**2*math.factorial(q)*float(np.sum(w*rho_tilde_at(j,t)**q))

R = 400
t0=time.time()
samp = {2: [], 3: [], 4: []}
for rep in range(R):
    alm = sample_alm(j, 999, rep)
    vals, x, w, phis, Bj = synth(j, alm, 4)
    for q in (2,3,4):
        samp[q].append(nu_q(vals, w, q))
dt = time.time()-t0
for q in (2,3,4):
    s = np.array(samp[q])
    ve = variance_exact(j,q)
    m4 = np.mean((s-s.mean())**4); vv = s.var(ddof=1)
    se = np.sqrt((m4 - (R-3)/(R-1)*vv**2)/R)
    print(f"q={q}: mc var={vv:.6g} exact={ve:.6g} z={(vv-ve)/se:+.2f}")
print(f"({dt:.1f}s for {R} reps at j=4, q<=4)")

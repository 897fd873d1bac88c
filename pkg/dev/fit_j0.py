"""Dev-only: fit polynomial coefficients for the J0 modulus/phase form on x >= 8.

J0(x) = sqrt(2/(pi x)) * (P(v) cos(x - pi/4) - Q(v)*(8/x)*sin(x - pi/4)),  v = (8/x)^2

P(v) = sqrt(pi x/2) (J0 cos(chi) + Y0 sin(chi)),  Qs(v) = (x/8)*sqrt(pi x/2)(Y0 cos(chi) - J0 sin(chi))
Fit Chebyshev series in v over [0,1], print monomial coefficients.
"""
import mpmath as mp
import numpy as np

mp.mp.dps = 60

def P_true(x):
    chi = x - mp.pi/4
    return mp.sqrt(mp.pi*x/2)*(mp.besselj(0,x)*mp.cos(chi) + mp.bessely(0,x)*mp.sin(chi))

def Q_true(x):
    chi = x - mp.pi/4
    return (x/8)*mp.sqrt(mp.pi*x/2)*(mp.bessely(0,x)*mp.cos(chi) - mp.besselj(0,x)*mp.sin(chi))

def fit(f, deg):
    # Chebyshev nodes in v on [0,1]; x = 8/sqrt(v), v=0 -> x=inf (use series limit)
    n = deg + 1
    k = np.arange(n)
    v = 0.5*(1 + np.cos(np.pi*(2*k+1)/(2*n)))
    ys = []
    for vi in v:
        if vi < 1e-12:
            # limit v->0: P->1, Q->-1/8? (first asymptotic term: Q0 ~ -1/(8x) => Qs = (x/8)*(-1/(8x))*8 ... recompute below)
            vi = 1e-12
        x = 8/mp.sqrt(mp.mpf(vi))
        ys.append(float(f(x)))
    ys = np.array(ys)
    # least squares polynomial fit in v (well conditioned at this degree with cheb nodes)
    V = np.vander(v, n, increasing=True)
    c = np.linalg.solve(V, ys)
    return c

for deg in (12, 14, 16):
    cP = fit(P_true, deg)
    cQ = fit(Q_true, deg)
    # validate on dense grid
    xs = np.concatenate([np.linspace(8, 40, 4001), np.linspace(40, 400, 2001), np.geomspace(400, 1e6, 200)])
    errs = []
    for x in xs:
        v = (8/x)**2
        P = np.polyval(cP[::-1], v)
        Q = np.polyval(cQ[::-1], v)
        chi = x - np.pi/4
        j0 = np.sqrt(2/(np.pi*x))*(P*np.cos(chi) - Q*(8/x)*np.sin(chi))
        errs.append(abs(j0 - float(mp.besselj(0, mp.mpf(x)))))
    print(deg, "max abs err:", max(errs))
    if deg == 16:
        np.set_printoptions(precision=17)
        print("cP =", repr(cP))
        print("cQ =", repr(cQ))

import mpmath as mp
import numpy as np
mp.mp.dps = 60

# deg-12 coefficients
def P_true(x):
    chi = x - mp.pi/4
    return mp.sqrt(mp.pi*x/2)*(mp.besselj(0,x)*mp.cos(chi) + mp.bessely(0,x)*mp.sin(chi))
def Q_true(x):
    chi = x - mp.pi/4
    return (x/8)*mp.sqrt(mp.pi*x/2)*(mp.bessely(0,x)*mp.cos(chi) - mp.besselj(0,x)*mp.sin(chi))
def fit(f, deg):
    n = deg + 1
    k = np.arange(n)
    v = 0.5*(1 + np.cos(np.pi*(2*k+1)/(2*n)))
    v = np.maximum(v, 1e-12)
    ys = np.array([float(f(8/mp.sqrt(mp.mpf(vi)))) for vi in v])
    V = np.vander(v, n, increasing=True)
    return np.linalg.solve(V, ys)
cP = fit(P_true, 12); cQ = fit(Q_true, 12)
print("cP = [" + ",\n      ".join(f"{c!r}" for c in cP) + "]")
print("cQ = [" + ",\n      ".join(f"{c!r}" for c in cQ) + "]")

# series branch error on [0,8]
def j0_series(x):
    s = 1.0; term = 1.0; k = 0
    x2 = 0.25*x*x
    while True:
        k += 1
        term *= -x2/(k*k)
        s += term
        if abs(term) < 1e-18*max(1.0, abs(s)) or k > 80:
            break
    return s
xs = np.linspace(0, 8, 3001)
err = max(abs(j0_series(x) - float(mp.besselj(0, mp.mpf(x)))) for x in xs)
print("series max abs err on [0,8]:", err)

# combined check vs mpmath incl bound |J0|<=x^-1/2
def j0_full(x):
    if x <= 8.0:
        return j0_series(x)
    v = (8.0/x)**2
    P = np.polyval(cP[::-1], v); Q = np.polyval(cQ[::-1], v)
    chi = x - np.pi/4
    return np.sqrt(2/(np.pi*x))*(P*np.cos(chi) - Q*(8.0/x)*np.sin(chi))
xs = np.concatenate([np.linspace(0,8,2000), np.linspace(8,100,5000), np.geomspace(100,1e5,500)])
print("full max abs err:", max(abs(j0_full(x)-float(mp.besselj(0,mp.mpf(x)))) for x in xs))
print("bound ok:", all(abs(j0_full(x)) <= x**-0.5 + 1e-15 for x in xs if x>0))

# first zero of J0
print("j0 zero:", mp.nstr(mp.findroot(lambda t: mp.besselj(0,t), 2.4), 20))
# J0(50) and bound
print("J0(50)=", float(mp.besselj(0,50)), " 50^-1/2=", 50**-0.5)

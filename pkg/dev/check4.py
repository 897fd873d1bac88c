# Wigner zero-m: lgamma vs exact-integer over all l<=60 triples; timing of both
import math, time
from math import lgamma, factorial

def w2_exact(l1, l2, l3):
    J = l1 + l2 + l3
    if J % 2: return 0.0
    if l3 < abs(l1-l2) or l3 > l1+l2: return 0.0
    L = J//2
    num = factorial(L)**2 * factorial(2*(L-l1)) * factorial(2*(L-l2)) * factorial(2*(L-l3))
    den = (factorial(L-l1)*factorial(L-l2)*factorial(L-l3))**2 * factorial(J+1)
    return num/den

def w2_lg(l1, l2, l3):
    J = l1 + l2 + l3
    if J % 2: return 0.0
    if l3 < abs(l1-l2) or l3 > l1+l2: return 0.0
    L = J//2
    s = (2*(lgamma(L+1) - lgamma(L-l1+1) - lgamma(L-l2+1) - lgamma(L-l3+1))
         + lgamma(2*(L-l1)+1) + lgamma(2*(L-l2)+1) + lgamma(2*(L-l3)+1) - lgamma(J+2))
    return math.exp(s)

t0=time.time(); maxrel = 0; cnt=0
for l1 in range(61):
    for l2 in range(61):
        for l3 in range(abs(l1-l2), min(60, l1+l2)+1):
            if (l1+l2+l3)%2: continue
            cnt += 1
            a = w2_exact(l1,l2,l3); b = w2_lg(l1,l2,l3)
            if a>0: maxrel = max(maxrel, abs(b-a)/a)
print("triples:", cnt, "max rel lgamma err:", maxrel, "time:", time.time()-t0)

t0=time.time()
for l1 in range(61):
    for l2 in range(61):
        for l3 in range(abs(l1-l2), min(60,l1+l2)+1):
            w2_exact(l1,l2,l3)
print("exact pass time:", time.time()-t0)

# big-l exact cost
t0=time.time(); v = w2_exact(2000,2000,2000); print("exact l=2000:", v, 2000**2*v, "t:", time.time()-t0)
t0=time.time(); v2 = w2_lg(2000,2000,2000); print("lgamma l=2000:", v2, "relerr:", abs(v2-v)/v, "t:", time.time()-t0)
print("limit 2/(pi*sqrt3):", 2/(math.pi*math.sqrt(3)), "l^2*w2:", 2000**2*v)

# 1) k4 k-statistic formula: verify unbiasedness symbolically for small n via sympy
import sympy as sp

def k4_expr(xs):
    n = sp.Integer(len(xs))
    S1 = sum(xs); S2 = sum(x**2 for x in xs); S3 = sum(x**3 for x in xs); S4 = sum(x**4 for x in xs)
    num = -6*S1**4 + 12*n*S1**2*S2 - 3*n*(n-1)*S2**2 - 4*n*(n+1)*S1*S3 + n**2*(n+1)*S4
    return num/(n*(n-1)*(n-2)*(n-3))

n = 5
xs = sp.symbols(f'x0:{n}')
e = sp.expand(k4_expr(xs))
# E[k4] should equal kappa4 = mu4 - 3 mu2^2 for iid centered-free variables.
# Replace monomial expectations: E[xi^a xj^b ...] = m_a m_b ... for distinct indices (iid raw moments m1..m4)
m1, m2, m3, m4 = sp.symbols('m1 m2 m3 m4')
mom = {1: m1, 2: m2, 3: m3, 4: m4}
def expectation(poly, xs):
    res = 0
    for term in sp.Add.make_args(sp.expand(poly)):
        c, factors = term.as_coeff_mul()
        prod = c
        for f in factors:
            b, ex = f.as_base_exp()
            if b in xs:
                prod *= mom[int(ex)]
            else:
                prod *= f
        res += prod
    return sp.simplify(res)
Ek4 = expectation(e, set(xs))
# true cumulant kappa4 in raw moments:
kappa4 = m4 - 4*m3*m1 - 3*m2**2 + 12*m2*m1**2 - 6*m1**4
print("k4 unbiased:", sp.simplify(Ek4 - kappa4) == 0)

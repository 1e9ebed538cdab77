"""High-precision evaluation of the bound spot value frozen in the tests.

s = 1, q = 16, n = 100, w1 / wbar = 1, ||C||_1 = 1, eps = 0.
"""
from mpmath import mp, mpf, sqrt, log, pi

mp.dps = 50
s, q, n = mpf(1), mpf(16), mpf(100)
value = sqrt(2 * pi) * (4 * sqrt(2) * sqrt(s * log(q) / n))
print(mp.nstr(value, 30))

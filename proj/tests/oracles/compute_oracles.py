#!/usr/bin/env python3
"""Independent high-precision oracles for values frozen into the C++ tests.

Run: python3 tests/oracles/compute_oracles.py
Nothing here shares code with the library; every value is recomputed from the
closed-form definitions with mpmath / numpy.
"""
import mpmath as mp
import numpy as np

mp.mp.dps = 40


def nu0(n, c):
    """nu^c_n(0)."""
    if n >= 1 and c / mp.sqrt(n) < mp.mpf(1) / 2:
        return mp.mpf(1) / 2 + c / mp.sqrt(n)
    return mp.mpf(1) / 2


def nu0_np(n, c):
    n = np.asarray(n, dtype=np.float64)
    safe = np.where(n >= 1, n, 1.0)
    v = c / np.sqrt(safe)
    return np.where((n >= 1) & (v < 0.5), 0.5 + v, 0.5)


def kakutani_shift_sum(c, k, N):
    n = np.arange(-N, N + 1, dtype=np.int64)
    d = nu0_np(n, c) - nu0_np(n - k, c)
    return float(mp.fsum(mp.mpf(float(x)) ** 2 for x in d if x != 0))


def log_rn_shift_nu(c, k, start, word):
    total = mp.mpf(0)
    for off, ch in enumerate(word):
        n = start + off
        x = int(ch)
        num = nu0(n - k, c) if x == 0 else 1 - nu0(n - k, c)
        den = nu0(n, c) if x == 0 else 1 - nu0(n, c)
        total += mp.log(num / den)
    return total


def bias_square_sum(c, N):
    total = mp.mpf(0)
    # only indices with a perturbed neighbour contribute
    for i in range(-1, N + 1):
        r0, r1 = nu0(i, c), nu0(i + 1, c)
        p01 = r0 * (1 - r1)
        p10 = (1 - r0) * r1
        total += (p01 / (p01 + p10) - mp.mpf(1) / 2) ** 2
    return total


def beta_for(dplus1):
    H = lambda b: -b * mp.log(b) - (1 - b) * mp.log(1 - b)
    return mp.findroot(lambda b: H(b) - mp.log(2) / dplus1, (mp.mpf("1e-30"), mp.mpf("0.5")), solver="bisect")


def hellinger_S(c, k, N):
    n = np.arange(-N, N + 1, dtype=np.int64)
    a = lambda m: nu0_np(m, c) - 0.5
    d = a(n - k) - a(n)
    return float(mp.fsum(mp.mpf(float(x)) ** 2 for x in d if x != 0))


def hellinger_total(c, k, N=4_000_000):
    # direct sum to N, then the integral tail of c^2 (1/sqrt(n-k) - 1/sqrt(n))^2
    n = np.arange(1, N + 1, dtype=np.float64)
    a = lambda m: nu0_np(m, c) - 0.5
    head = np.sum((a(n - k) - a(n)) ** 2)
    x = mp.mpf(N) + mp.mpf(1) / 2
    F = lambda t: mp.log(t * (t - k) / (mp.sqrt(t) + mp.sqrt(t - k)) ** 4)
    tail = c * c * (-mp.log(16) - F(x))
    return float(head) + float(tail)


if __name__ == "__main__":
    print("kakutani nu^0.1 k=1 N=1e5:", repr(kakutani_shift_sum(0.1, 1, 100_000)))
    word = "01101011100101001110"
    print("log_rn_shift nu^(1/6) k=1 start=-2:", mp.nstr(log_rn_shift_nu(mp.mpf(1) / 6, 1, -2, word), 17))
    b6 = bias_square_sum(mp.mpf(1) / 6, 1_000_000)
    b5 = bias_square_sum(mp.mpf(1) / 6, 100_000)
    print("bias nu^(1/6) N=1e6:", mp.nstr(b6, 17), " N=1e5:", mp.nstr(b5, 17), " incr:", mp.nstr(b6 - b5, 6))
    print("beta_for(2):", mp.nstr(beta_for(2), 17))
    print("beta_for(883):", mp.nstr(beta_for(883), 17))
    print("hellinger c=0.3 k=10 N=1e5:", repr(hellinger_S(0.3, 10, 100_000)))
    print("good_prob iid 0.3:", repr(float(2 * mp.mpf("0.3") ** 3 * mp.mpf("0.7") ** 5)))
    for c in (0.5, 1.0, 1.5):
        ks = [1000, 2000, 5000, 10000]
        vals = [hellinger_total(c, k) for k in ks]
        print("S_total c=%g:" % c, [repr(v) for v in vals])

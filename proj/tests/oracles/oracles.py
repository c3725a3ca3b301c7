"""Independent oracles for the frozen expectations in the C++ test suites.

Everything here is computed by brute force (Euler's criterion, trial
division, plain numpy sieves) and never calls into the C++ library.
Run:  python3 tests/oracles/oracles.py
"""
import math
import numpy as np

MASK64 = (1 << 64) - 1


class MT19937_64:
    """Reference std::mt19937_64 (seeded through the standard seed(value) path)."""

    def __init__(self, seed):
        self.mt = [0] * 312
        self.mt[0] = seed & MASK64
        for i in range(1, 312):
            self.mt[i] = (6364136223846793005 * (self.mt[i - 1] ^ (self.mt[i - 1] >> 62)) + i) & MASK64
        self.idx = 312

    def _twist(self):
        upper, lower = 0xFFFFFFFF80000000, 0x7FFFFFFF
        for i in range(312):
            x = (self.mt[i] & upper) | (self.mt[(i + 1) % 312] & lower)
            xa = x >> 1
            if x & 1:
                xa ^= 0xB5026F5AA96619E9
            self.mt[i] = self.mt[(i + 156) % 312] ^ xa
        self.idx = 0

    def __call__(self):
        if self.idx >= 312:
            self._twist()
        y = self.mt[self.idx]
        self.idx += 1
        y ^= (y >> 29) & 0x5555555555555555
        y ^= (y << 17) & 0x71D67FFFEDA60000
        y ^= (y << 37) & 0xFFF7EEE000000000
        y ^= y >> 43
        return y & MASK64


def draw_below(gen, n):
    """Multiply-high reduction of a 64-bit draw into [0, n)."""
    return (gen() * n) >> 64


def sieve(n):
    s = np.ones(n + 1, dtype=bool)
    s[:2] = False
    for i in range(2, math.isqrt(n) + 1):
        if s[i]:
            s[i * i :: i] = False
    return s


PR = sieve(5_000_000)
PRIMES = np.nonzero(PR)[0]


def legendre(n, p):
    t = pow(n % p, (p - 1) // 2, p)
    return -1 if t == p - 1 else t


def jacobi_brute(m, q):
    """Product of Legendre symbols over the factorization of q."""
    res, x = 1, q
    d = 3
    while d * d <= x:
        while x % d == 0:
            res *= legendre(m, d)
            x //= d
        d += 2
    if x > 1:
        res *= legendre(m, x)
    return res


def least_nonresidue(p):
    n = 2
    while legendre(n, p) != -1:
        n += 1
    return n


def d_u(p, u):
    h = 1
    while legendre(u + h, p) != -1:
        h += 1
    return h


def erdos_constant():
    total, k = 0.0, 0
    terms = []
    for p in PRIMES:
        k += 1
        terms.append(p / 2.0**k)
        if p / 2.0 ** (k - 1) < 1e-12:
            break
    return math.fsum(terms), k


def erdos_mean(x):
    ps = [int(p) for p in PRIMES if 3 <= p <= x]
    return len(ps), sum(least_nonresidue(p) for p in ps) / len(ps)


def gap_tail(p, h):
    res = np.zeros(p, dtype=bool)
    k = np.arange(1, (p - 1) // 2 + 1, dtype=np.int64)
    res[(k * k) % p] = True
    nres = np.nonzero(~res[1:])[0] + 1
    gaps = np.diff(nres)
    sel = gaps[gaps >= h]
    return len(sel), int(sel.sum())


def ceil_quartic_root(p):
    h = 1
    while h**4 < p:
        h += 1
    return h


def squarefree_pairs(u, h):
    lo, hi = u + 1, u + h + 1
    sf = np.ones(hi - lo + 1, dtype=bool)
    for p in PRIMES:
        p = int(p)
        if p * p > hi:
            break
        sq = p * p
        start = ((lo + sq - 1) // sq) * sq
        sf[start - lo :: sq] = False
    return int(np.count_nonzero(sf[:-1] & sf[1:])), int(np.count_nonzero(sf[:-1]))


def is_squarefree(n):
    d = 2
    while d * d <= n:
        if n % (d * d) == 0:
            return False
        d += 1
    return True


def main():
    print("primes in [1e6, 2e6]:", int(np.count_nonzero(PR[1_000_000 : 2_000_001])))
    c, k = erdos_constant()
    print(f"erdos constant: {c!r} (K={k})")
    for x in (10**2, 10**3, 10**4, 10**5, 10**6):
        n, m = erdos_mean(x)
        print(f"erdos mean x={x}: primes={n} mean={m!r} distance={abs(m - c)!r}")

    ps = [int(p) for p in PRIMES if p <= 10**6]
    a = math.fsum(math.log1p(-2.0 / (p * p)) for p in ps)
    print(f"feller_tornier_A(1e6) = {math.exp(a)!r}")
    mert = math.exp(math.fsum(math.log1p(-1.0 / p) for p in ps))
    gamma = 0.57721566490153286060651209
    print(f"mertens(1e6) = {mert!r}, normalized = {mert * math.exp(gamma) * math.log(1e6)!r}")
    print("mertens(10) =", 48 / 210)

    q_primes = [int(p) for p in PRIMES if 10**5 <= p <= 2 * 10**5]
    print("exceptional(1e5,0,2) =", sum(1 for p in q_primes if p % 8 in (1, 7)), "of", len(q_primes))

    # Burgess single point
    q = 30021
    M = math.ceil(q ** (2.0 / 3.0))
    s = sum(jacobi_brute(m, q) for m in range(1, M + 1))
    print(f"burgess q=30021 M={M} sum={s} ratio={abs(s) / (M**0.5 * q**0.1875)!r}")

    # Burgess seeded sweep: seed 20141014, 100 odd non-square q in [1e4, 1e6]
    gen = MT19937_64(20141014)
    qs = []
    while len(qs) < 100:
        q = 10**4 + draw_below(gen, 10**6 - 10**4 + 1)
        if q % 2 == 1 and math.isqrt(q) ** 2 != q:
            qs.append(q)
    ratios = []
    for q in qs:
        # ceil(q^(2/3)) by exact integer correction
        M = round(q ** (2.0 / 3.0))
        while M**3 < q * q:
            M += 1
        while (M - 1) ** 3 >= q * q:
            M -= 1
        s = sum(jacobi_brute(m, q) for m in range(1, M + 1))
        ratios.append(abs(s) / (M**0.5 * q**0.1875))
    print("sweep first q:", qs[:5])
    print(f"sweep max ratio={max(ratios)!r} median={float(np.median(ratios))!r}")

    # gap tails with h = ceil(p^(1/4))
    def max_c1(lo, hi):
        best = 0.0
        for p in PRIMES:
            p = int(p)
            if lo <= p <= hi:
                h = ceil_quartic_root(p)
                n, _ = gap_tail(p, h)
                best = max(best, n * h * h / math.sqrt(p))
        return best

    print(f"max c1 on [1e3,2e3] = {max_c1(1000, 2000)!r}")
    print(f"max c1 on [1e4,2e4] = {max_c1(10000, 20000)!r}")
    print("gap_tail(11,2) =", gap_tail(11, 2))

    pc, cnt = squarefree_pairs(10**9, 10**6)
    print(f"squarefree pairs u=1e9 h=1e6: pairs={pc} count={cnt} ratio={pc / (math.exp(a) * 10**6)!r}")

    # exceptional densities for ten seeded u, Q = 1e6
    Q = 10**6
    gen = MT19937_64(2014)
    us = [draw_below(gen, 2 * Q + 1) for _ in range(10)]
    print("u samples:", us)
    big = [int(p) for p in PRIMES if Q <= p <= 2 * Q]
    for u in us:
        du = [d_u(p, u) for p in big]
        print(u, [sum(1 for d in du if d > h) for h in (5, 10, 20, 30)], "total", len(big))

    # proof trace values
    def trace(Q, u, h, eta):
        I = range(u + 1, u + h + 1)
        regime = "large-h" if u < 3 or h >= math.sqrt(u) / math.log(u) else "small-h"
        if regime == "large-h":
            n1 = [n for n in I if n % 4 == 1 and is_squarefree(n)]
            n3 = [n for n in I if n % 4 == 3 and is_squarefree(n)]
            N = n1 if len(n1) >= len(n3) else n3
        else:
            N = [n for n in I if n % 4 == 1]
        T = sum(1 for a in N for b in N if math.isqrt(a * b) ** 2 == a * b)
        ps = [int(p) for p in PRIMES if Q <= p <= 2 * Q]
        s_direct = sum(sum(legendre(n, p) for n in N) ** 2 for p in ps)
        M = 2 * Q
        thr = M**eta
        small = [int(p) for p in PRIMES if p <= thr]
        rough = [m for m in range(1, M + 1) if all(m % p for p in small)]
        s_rough = 0
        for m in rough:
            s_rough += sum(jacobi_brute(n, m) if m > 1 else 1 for n in N) ** 2
        exc = sum(1 for p in ps if d_u(p, u) > h)
        print(f"trace Q={Q} u={u} h={h} eta={eta}: regime={regime} N={N} T={T} "
              f"S_direct={s_direct} rough={len(rough)} S_rough={s_rough} exceptional={exc} "
              f"bound={s_direct / (len(N) - 1) ** 2!r}")

    trace(10**5, 0, 50, 0.1)
    trace(10**5, 10**5, 50, 0.1)


if __name__ == "__main__":
    main()

"""Independent high-precision oracles for the frozen test fixtures.

Run: python3 tests/oracles/fixtures.py
Nothing here shares code with the C++ library: the Green's function comes from
the annulus prime function, kernels from their closed-form series, and the
extremal norm from the Schur complement of the kernel.
"""
from mpmath import mp, mpf, mpc, log, fabs, pi, findroot, quad, exp, diff, polar, rect

mp.dps = 40


def prime(zeta, q, terms=200):
    """P(zeta) = (1 - zeta) prod_k (1 - q^{2k} zeta)(1 - q^{2k}/zeta)."""
    p = 1 - zeta
    for k in range(1, terms):
        qk = q ** (2 * k)
        p *= (1 - qk * zeta) * (1 - qk / zeta)
    return p


def green(z, a, q):
    """Green's function of q < |z| < 1 with pole a, vanishing on both circles."""
    u = log(fabs(prime(z / a, q) / prime(z * mp.conj(a), q)))
    w1 = log(fabs(z) / q) / log(1 / q)
    return -u - log(fabs(a)) * w1


def bergman_norm2(n, r):
    return 2 * log(1 / r) if n == -1 else (1 - r ** (2 * n + 2)) / (n + 1)


def bergman_kernel(z, w, r, N=600):
    return sum((z * mp.conj(w)) ** n / bergman_norm2(n, r) for n in range(-N, N + 1))


def main():
    r = mpf("0.5")
    print("# Green values (prime function)")
    for z, a in [(mpc("0.6", "0.2"), mpf("0.7")), (mpc(0, "0.8"), mpc("-0.6", "0.1")), (mpf("-0.9"), mpc("0.5", "-0.5"))]:
        print(f"green z={z} a={a}: {mp.nstr(green(z, a, r), 20)}")

    print("# Bergman kernel zeros on the negative axis")
    for w in [mpf("0.6"), mpf("0.7")]:
        x = findroot(lambda x: bergman_kernel(x, w, r), (mpf("-0.7"), mpf("-0.5001")), solver="anderson", tol=mpf(10) ** -30)
        print(f"bergman zero w={w}: {mp.nstr(x, 20)}")

    print("# A^2 extremal norm, z0=0.7, z1=-0.7")
    z0, z1 = mpf("0.7"), mpf("-0.7")
    k00 = bergman_kernel(z0, z0, r)
    k01 = bergman_kernel(z0, z1, r)
    k11 = bergman_kernel(z1, z1, r)
    print("norm:", mp.nstr(1 / mp.sqrt(k00 - fabs(k01) ** 2 / k11), 20))

    print("# Schottky function s_1 at 8 nodes, r=0.5, z0=0.7")
    z0 = mpf("0.7")
    for comp, rho in [(1, mpf(1)), (2, r)]:
        for k in range(8):
            th = 2 * pi * k / 8
            # outward normal derivative: +d/drho on the outer circle, -d/drho on the inner
            sgn = 1 if comp == 1 else -1
            dg = sgn * diff(lambda t: green(rect(t, th), z0, r), rho)
            dw = sgn / (rho * log(1 / r))
            print(f"s1 comp={comp} k={k}: {mp.nstr(dw / dg, 20)}")

    print("# defect constant 2 pi int_r^1 rho log rho")
    print(mp.nstr(2 * pi * quad(lambda t: t * log(t), [r, 1]), 20))


if __name__ == "__main__":
    main()

"""Reference values frozen into the unit tests.

Every number here is computed with mpmath at 50 digits, independently of the
C++ implementation. Run with `python3 freeze_values.py` to regenerate.
"""
import mpmath as mp

mp.mp.dps = 50


def ml(a, b, z):
    a, b, z = mp.mpf(a), mp.mpf(b), mp.mpf(z)
    if z == 0:
        return 1 / mp.gamma(b)
    # Laplace inversion of s^(a-b)/(s^a - z) at t = 1.
    return mp.invertlaplace(lambda s: s ** (a - b) / (s ** a - z), 1, method="talbot")


def show(name, value):
    print(f"{name} = {mp.nstr(value, 25)}")


show("gamma(4.7)", mp.gamma(4.7))
show("ml(0.5,1,-1)", ml(0.5, 1, -1))
show("e*erfc(1)", mp.e * mp.erfc(1))
show("relaxation(0.7,5,0.3)", ml(0.7, 1, -5 * mp.mpf(0.3) ** 0.7))
show("duhamel_kernel(0.6,3,0.2)", mp.mpf(0.2) ** (-0.4) * ml(0.6, 0.6, -3 * mp.mpf(0.2) ** 0.6))
show("ml(0.3,0.3,-2)", ml(0.3, 0.3, -2))
show("ml(0.9,1.9,-50)", ml(0.9, 1.9, -50))
show("ml(0.1,1,-100)", ml(0.1, 1, -100))
show("ml(1.5,1,-3)", ml(1.5, 1, -3))
show("beta(0.3,0.45)", mp.quad(lambda s: s ** (-0.7) * (1 - s) ** (-0.55), [0, 0.5, 1]))
show("int_0^1 s^-0.3 cos s", mp.quad(lambda s: s ** (-0.3) * mp.cos(s), [0, 1]))
show("int_0^1 s^-0.3 exp s", mp.quad(lambda s: s ** (-0.3) * mp.exp(s), [0, 1]))
show("int_0^1 s^-0.3 (1-s)^0.4 exp s",
     mp.quad(lambda s: s ** (-0.3) * (1 - s) ** 0.4 * mp.exp(s), [0, 0.5, 1]))

# Convolution of the Mittag-Leffler kernel with f = 1.
a, lam, tau = mp.mpf(0.6), mp.mpf(4), mp.mpf(0.7)
show("duhamel f=1 (0.6,4,0.7)",
     mp.quad(lambda s: (tau - s) ** (a - 1) * ml(a, a, -lam * (tau - s) ** a), [0, tau / 2, tau]))
show("closed form", tau ** a * ml(a, a + 1, -lam * tau ** a))

# Mode with constant source: v = u E_{b,1} + c t^b E_{b,b+1}.
b, lam, u, c, tau = mp.mpf(0.4), mp.pi ** 2, mp.mpf(0.8), mp.mpf(1.5), mp.mpf(0.3)
show("const source mode (0.4,pi^2,0.8,1.5,0.3)",
     u * ml(b, 1, -lam * tau ** b) + c * tau ** b * ml(b, b + 1, -lam * tau ** b))
show("pure relaxation E_{0.5,1}(-pi^2 0.25^0.5)", ml(0.5, 1, -mp.pi ** 2 * mp.sqrt(0.25)))

# L1 weights: b_k = (1/Gamma(1-beta)) * (1/tau) * int over cell of (t_m - s)^(-beta).
beta, tau, m = mp.mpf(0.5), mp.mpf(0.25), 4
for k in range(m):
    lo, hi = (m - k - 1) * tau, (m - k) * tau
    w = mp.quad(lambda r: r ** (-beta), [lo, hi]) / tau / mp.gamma(1 - beta)
    show(f"l1 weight d={m - 1 - k}", w)

# History term: int_0^w (w-s)^(-bj) s^(bk-1) ds / Gamma(1-bj).
bk, bj, w = mp.mpf(0.3), mp.mpf(0.8), mp.mpf(0.5)
show("history (0.3 -> 0.8, width 0.5)",
     mp.quad(lambda s: (w - s) ** (-bj) * s ** (bk - 1), [0, w / 2, w]) / mp.gamma(1 - bj))

"""Regenerate golden_constants.json with 40-digit arithmetic."""
import json
from mpmath import mp, mpf, pi, gamma, sqrt, sin, besseljzero, quad, cos

mp.dps = 40


def omega(k):
    return pi ** (mpf(k) / 2) / gamma(mpf(k) / 2 + 1)


def c_np(n, p):
    return (n * omega(n)) ** (mpf(1) / n) * (n * omega(n) * omega(p - 1) / (2 * omega(n + p - 2))) ** (mpf(1) / p)


def talenti(p):
    if p == 1:
        return mpf(2)
    return (mpf(2) / p) * (p - 1) ** (mpf(1) / p - 1) * (pi - pi / p) / sin(pi / p)


def moment(n, p):
    return 2 * omega(n + p - 2) / (n * omega(n) * omega(p - 1))


def reverse_zhang(n, p):
    inner = (mpf(2) / n) * omega(n - 1) / omega(n) ** 2 * talenti(p) ** (n - 1) * moment(n, p) ** (mpf(1) / p)
    return c_np(n, p) * inner ** (mpf(1) / n)


def huang_li(n, p):
    num = pi ** (1 / (2 * mpf(p)) + mpf(1) / 2) * gamma(mpf(n + p) / 2) ** (mpf(1) / p) * gamma(1 + mpf(n) / p) ** (mpf(1) / n)
    den = (2 ** (mpf(1) / p + 1) * gamma(1 + mpf(n) / 2) ** (mpf(1) / n + mpf(1) / p)
           * gamma(mpf(p + 1) / 2) ** (mpf(1) / p) * gamma(1 + mpf(1) / p))
    return num / den


def centroid(n, p):
    b = omega(n + p) / (omega(2) * omega(n) * omega(p - 1))
    r = n * omega(n + p - 2) / (omega(2) * omega(n - 2) * omega(p - 1))
    return b, r


ps = [mpf(1), mpf(3) / 2, mpf(2), mpf(3), mpf("2.5")]
out = {"gamma": {}, "omega": {}, "entries": [], "bessel_zero": {}}
for x in ["0.1", "0.5", "1", "1.5", "2.5", "5", "7.3", "12.25", "30.5"]:
    out["gamma"][x] = float(gamma(mpf(x)))
for k in ["0", "0.5", "1", "2", "2.5", "3", "4", "5", "10", "20"]:
    out["omega"][k] = float(omega(mpf(k)))
for n in [2, 3, 4]:
    for p in ps:
        b, r = centroid(n, p)
        quad_moment = quad(lambda t: abs(cos(t)) ** p, [0, pi / 2, pi, 3 * pi / 2, 2 * pi]) / (2 * pi) if n == 2 else None
        out["entries"].append({
            "n": n, "p": float(p),
            "c_np": float(c_np(n, p)),
            "talenti_C": float(talenti(p)),
            "sphere_moment_a": float(moment(n, p)),
            "sphere_moment_quadrature": float(quad_moment) if quad_moment is not None else None,
            "reverse_zhang_absolute": float(reverse_zhang(n, p)),
            "huang_li_alpha": float(huang_li(n, p)),
            "centroid_b": float(b),
            "centroid_r": float(r),
        })
for nu, k in [(0, 1), (0, 2), (0, 3), (1, 1), (2.5, 1)]:
    out["bessel_zero"][f"{nu}_{k}"] = float(besseljzero(mpf(nu), k))

with open(__file__.replace("make_golden.py", "golden_constants.json"), "w") as fh:
    json.dump(out, fh, indent=1)

"""Smoke test for the permpoly extension module.

Build first with `pip install --no-build-isolation -e crates/python`.
"""

import json
import math

import permpoly


def close(a, b, tol=1e-10):
    return abs(a - b) <= tol * max(1.0, abs(b))


def main():
    a = [[1, 2j], [0.5, -1]]
    exact = 1 * -1 + 2j * 0.5
    for method in ("naive", "ryser", "glynn", "contour"):
        assert close(permpoly.per(a, method), exact, 1e-9), method

    coeffs = permpoly.perm_poly(a)
    mu = 0.3 - 0.2j
    direct = (mu - 1) * (mu + 1) + 2j * 0.5
    assert close(sum(c * mu**k for k, c in enumerate(coeffs)), direct)
    roots = permpoly.roots_of(coeffs)
    assert len(roots) == 2 and all(abs(sum(c * r**k for k, c in enumerate(coeffs))) < 1e-10 for r in roots)

    # n = 1: <mu - h> = mu and <(mu1 - h)(mu2 - h)> = mu1 mu2 + 1
    assert close(permpoly.mean_perm_poly("gue", 1, 0.7), 0.7)
    assert close(permpoly.two_point("gue", 1, 0.3, -0.1), 0.97)
    assert close(permpoly.two_point("cue", 1, 0.3, 0.2j), 1 + 0.3 * -0.2j)

    est = permpoly.estimate_two_point("gue", 2, 0.3, -0.1, samples=20000, seed=1)
    assert abs(est.z_score(permpoly.two_point("gue", 2, 0.3, -0.1))) < 4, est
    again = permpoly.estimate_two_point("gue", 2, 0.3, -0.1, samples=20000, seed=1)
    assert est.mean == again.mean

    clouds = permpoly.root_samples("gue", 4, samples=20, seed=3)
    assert len(clouds) == 20 and all(len(r) == 4 for r in clouds)
    summary = json.loads(permpoly.root_summary("gue", 4, samples=20, seed=3))
    assert summary["conjugate_closed_fraction"] == 1.0

    phi, rho = permpoly.asymptotics("ginibre", 0.5)
    assert close(phi, 0.25 - 1)
    assert close(rho, 1 / math.pi)

    ok, text = permpoly.verify("exact")
    assert ok and "PASS" in text

    try:
        permpoly.per([[1, 2, 3]])
    except ValueError:
        pass
    else:
        raise AssertionError("non-square matrix accepted")

    print("python smoke test: ok")


if __name__ == "__main__":
    main()

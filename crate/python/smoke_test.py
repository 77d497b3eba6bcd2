"""Smoke test for the xizero extension module.

Build the library first, then run from the repository root:

    cargo build --release -p xizero-py
    cp target/release/libxizero.so python/xizero.so
    python3 python/smoke_test.py
"""

import cmath
import math
import os
import sys

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

import xizero  # noqa: E402


def close(a, b, tol):
    return abs(a - b) <= tol


def main():
    row = xizero.eulerian_b(3)
    assert row == [1, 23, 23, 1], row
    assert sum(xizero.eulerian_b(6)) == 2**6 * math.factorial(6)
    assert xizero.series_identity(12)

    xi2 = xizero.XiPolynomial(2)
    assert xi2.degree == 1
    assert xi2.coefficients() == [(5, 96), (-1, 16)], xi2.coefficients()
    assert xi2.eval(5, 6) == (0, 1)

    m = xizero.EmpiricalMeasure(2)
    assert len(m) == 1
    assert m.roots_decimal(30)[0].startswith("0.83333333333333333333333333333")

    m16 = xizero.EmpiricalMeasure(16, "1e-30")
    roots = m16.roots()
    assert len(roots) == 15 and roots == sorted(roots)
    assert all(0.0 < r < 1.0 for r in roots)
    assert close(m16.ks_distance(), 0.0625, 1e-3)

    law = xizero.LimitLaw(128)
    assert close(law.density(0.25), 0.4814975524496145, 1e-14)
    assert close(law.cdf(0.25), 0.2141632068904435, 1e-14)
    assert close(law.quantile(0.5), 0.8411684068199367, 1e-14)
    assert close(law.stieltjes(2 + 0j), 0.8022781617244770, 1e-14)
    s = law.stieltjes(1j)
    assert s.imag < 0
    assert cmath.isclose(s, -0.38420646199 - 0.68473812707j, abs_tol=1e-10)
    assert abs(m16.stieltjes(2 + 0j) - law.stieltjes(2 + 0j)) < 0.01

    value, bound = xizero.s_ratio(50, math.exp(-1))
    assert close(value, 2.0, 0.05) and bound < 1e-20

    try:
        law.density(1.5)
    except ValueError:
        pass
    else:
        raise AssertionError("density outside (0,1) must raise")

    text, passed = xizero.verify([8], precision_bits=64)
    assert passed, text
    assert text.startswith("xizero verify v1")
    print("smoke test passed, xizero", xizero.__version__)


if __name__ == "__main__":
    main()

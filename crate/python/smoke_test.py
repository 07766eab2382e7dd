"""Smoke test for the pypolyspec extension module.

Build and install first:
    maturin build --release -m crates/python/Cargo.toml -o target/wheels
    pip install target/wheels/pypolyspec-*.whl
"""

import cmath
import json
import math

import pypolyspec as ps


def check_polynomial():
    p = ps.MatrixPolynomial.sample(3, 4, seed=7)
    assert (p.n, p.k) == (3, 4)
    ev = p.eigenvalues()
    assert len(ev) == 12
    for lam in ev:
        sv = ps.singular_values(p.evaluate(lam))
        assert sv[-1] <= 1e-9 * max(sv[0], 1.0), sv
    back = ps.MatrixPolynomial.from_json(p.to_json())
    assert back.coeffs() == p.coeffs()


def check_scalar_roots():
    # x^2 - 3x + 2
    p = ps.MatrixPolynomial([[[2 + 0j]], [[-3 + 0j]]])
    roots = sorted(z.real for z in p.eigenvalues())
    assert all(abs(r - e) < 1e-12 for r, e in zip(roots, [1.0, 2.0])), roots


def check_distances():
    pts = ps.sample_spectrum(200, 1, trials=5, seed=1)
    assert len(pts) == 1000
    report = ps.distance_report(pts, "unit-disc")
    assert report["radial_ks"] < 0.08, report
    assert abs(ps.radial_cdf("disc-mixture", 0.5, k=4) - (0.75 + 0.25 * 0.25)) < 1e-15
    circle = [cmath.exp(2j * math.pi * j / 8) for j in range(8)]
    assert ps.distance_report(circle, "unit-circle")["angular_ks"] <= 0.125 + 1e-12


def check_bounds_and_gaps():
    b = ps.pseudoinverse_tail_bound(2, 6, 0.1)
    assert abs(b / 1.0013273293120123e-8 - 1) < 1e-12, b
    a = [[1 + 0j, 0j], [0j, 2 + 0j]]
    assert ps.replacement_gap(a, a, 0.3 + 0.1j) == 0.0
    try:
        ps.replacement_gap(a, [[1 + 0j]], 0.5)
    except ValueError:
        pass
    else:
        raise AssertionError("mismatched shapes accepted")


def check_experiment():
    cfg = {"regime": "grow-k", "n_values": [2], "k_values": [4, 8, 16], "target_points": 200, "seed": 3}
    res = ps.run_experiment(json.dumps(cfg))
    assert [c["k"] for c in res["cells"]] == [4, 8, 16]
    again = ps.run_experiment(json.dumps(cfg))
    assert res == again
    try:
        ps.run_experiment(json.dumps({**cfg, "k_values": []}))
    except ValueError:
        pass
    else:
        raise AssertionError("empty k_values accepted")


if __name__ == "__main__":
    check_polynomial()
    check_scalar_roots()
    check_distances()
    check_bounds_and_gaps()
    check_experiment()
    print("pypolyspec smoke test: ok")

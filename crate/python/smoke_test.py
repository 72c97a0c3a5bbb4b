"""Smoke test of the conepencil Python bindings.

Build and install first:
    maturin build --release -m crates/python/Cargo.toml -o dist && pip install dist/conepencil_py-*.whl
"""

import math
import sys

import conepencil_py as cp


def bisect(f, lo, hi, iterations=200):
    for _ in range(iterations):
        mid = 0.5 * (lo + hi)
        if f(mid) < 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def main():
    cap = cp.CapDomain.hemisphere(3)
    ground = cap.dirichlet_eigenvalue()
    assert abs(ground["eigenvalue"] - 2.0) < 1e-8, ground
    assert abs(ground["m_exponent"] - 1.0) < 1e-8, ground
    assert abs(cap.area() - 2.0 * math.pi) < 1e-12

    theta, mode = cap.theta_omega()
    assert abs(theta - 6.0) < 1e-6 and mode == 1, (theta, mode)
    assert cp.theta_omega_lambda(2.0, 0.0, 0.0, 3, 0.25, 4.0 * math.pi) == 2.0

    assert cp.phi(0.0, 3, 0.5, 1.0) == 0.0
    oracle = bisect(lambda t: t**3 + 7 * t**2 + 6 * t - 2, 0.0, 1.0)
    t = cp.t_of_m(3, 0.5, 1.0)
    assert abs(t - oracle) < 1e-10, (t, oracle)
    strip = cp.strip_report(3, 0.5, 1.0)
    assert abs(strip["p_min"] - 2.0 / (1.0 + oracle)) < 1e-9, strip

    control = cp.min_singular_value(cap, 0.5, complex(1.0, 0.0), 1, grid=64)
    interior = cp.min_singular_value(cap, 0.5, complex(-0.5, 0.0), 1, grid=64)
    assert control < 1e-4 < interior, (control, interior)
    scan = cp.strip_scan(cap, 0.5, grid_re=3, grid_im=3, mesh=32, modes=1)
    assert scan["flagged"] == [] and len(scan["grid"]) == 9

    assert cp.classify_zone(1.0, 3.0) == "E1"
    assert cp.classify_zone(1.0, 0.4) == "E3"
    assert cp.classify_zone(1.0, 2.0) == "E2"
    model = cp.KernelBoundModel(3, 0.25)
    assert abs(model.gradient_bound([1.0, 0.0, 0.0], [0.0, 4.0, 0.0], 0.5) - 4.0 ** -2.25) < 1e-14
    assert model.homogeneity_check([1.0, 0.0, 0.0], [0.0, 4.0, 0.0], 3.0)
    assert not model.tampered().homogeneity_check([1.0, 0.0, 0.0], [0.0, 4.0, 0.0], 3.0)
    try:
        model.gradient_bound([1.0, 0.0, 0.0], [1.0, 0.0, 0.0], 0.5)
    except cp.ConePencilError as err:
        assert "green_model" in str(err) or "singular" in str(err).lower(), err
    else:
        raise AssertionError("coincident points must raise")

    harness_model = cp.KernelBoundModel(3, strip["alpha"])
    verdict = cp.verify_lemma(1, harness_model, suite_size=2)
    assert verdict["outcome"] == "PASS", verdict["diagnostics"]
    p_crit = harness_model.critical_exponent()
    sharp = cp.verify_lemma(2, harness_model, p=0.9 * p_crit, levels=3)
    assert sharp["outcome"] == "DIVERGES", sharp["diagnostics"]

    assert cp.run_cli(["--nu", "0.6", "analyze"]) == 2

    print("conepencil_py", cp.__version__, "smoke test passed")
    return 0


if __name__ == "__main__":
    sys.exit(main())

"""Smoke test for the `breather` extension module.

Build and run from the repository root:

    cargo build -p breather-py --release --features extension-module
    cp target/release/libbreather.so python/breather.so
    python3 python/smoke_test.py
"""

import math

import breather


def main():
    model = breather.Model.single_site(math.sqrt(5.0), "repulsive", m=1.0, p=3)
    assert abs(model.e - 5.0) < 1e-12, model.e
    assert model.nonresonance()["pass"]
    assert len(model.phi) == len(model.sites) == 121

    sol = model.solve(0.05)
    assert sol.iterations < 30
    history = sol.update_history
    assert all(b < a for a, b in zip(history, history[1:]))
    residual = sol.residual()
    naive = model.naive_residual(0.05)
    assert residual < 1e-9 and naive / residual > 1e3, (residual, naive)

    run = sol.verlet(2000)
    assert run["return_error"] < 1e-6, run

    decay = model.decay()
    assert abs(decay["a_fit"] - math.asinh(math.sqrt(5.0) / 2.0)) < 1e-3
    assert abs(decay["e_a"] - model.e) < 1e-8

    report = breather.check_nonresonance(-1.0, math.sqrt(2.0))
    assert not report["pass"] and report["resonant"] == [2]

    try:
        model.solve(5.0)
    except breather.ConvergenceError:
        pass
    else:
        raise AssertionError("large amplitude should not converge")

    try:
        breather.Model.from_table([0.0], m=1.0, p=3)
    except breather.AssumptionError:
        pass
    else:
        raise AssertionError("free lattice has no bound state")

    print(
        f"ok: e = {model.e:.12f}, epsilon = {sol.epsilon:.6e}, "
        f"residual = {residual:.2e}, return error = {run['return_error']:.2e}"
    )


if __name__ == "__main__":
    main()

"""Smoke test for the betarate extension module.

Build and install first, e.g.
    maturin build --release -m crates/python/Cargo.toml
    pip install target/wheels/betarate-*.whl
"""

import math

import betarate as br


def close(x, y, tol=1e-12):
    return abs(x - y) <= tol


def main():
    uniform = br.BetaPosterior.from_counts(0, 0)
    one_win = br.BetaPosterior.from_counts(1, 0)
    assert (uniform.alpha, uniform.beta) == (1, 1)

    r = br.pr_rate_greater(uniform, one_win)
    assert close(r.probability, 2 / 3), r
    assert r.method == "closed_form_rate"

    r = br.pr_scaled_rate_greater(uniform, uniform, 2.0)
    assert close(r.probability, 0.25), r

    a, b = br.BetaPosterior(3, 5), br.BetaPosterior(4, 6)
    closed = br.pr_scaled_rate_greater(a, b, 1.5).probability
    double = br.pr_scaled_double_sum(a, b, 1.5).probability
    jacobi = br.pr_scaled_rate_greater(a, b, 1.5, backend="jacobi").probability
    assert close(closed, double, 1e-10) and close(closed, jacobi, 1e-10)
    mc = br.mc_oracle(a, b, 1.5, 200_000, seed=7).probability
    assert abs(mc - closed) < 5e-3, (mc, closed)
    assert br.decide(a, b, 1.0, 0.95) == "undecided"

    t = br.ContingencyTable(1, 1, 1, 1)
    assert close(br.fisher_table_probability(t), 2 / 3)
    assert 0.0 <= br.fisher_exact_p(br.ContingencyTable(1, 11, 9, 3), "two_sided") <= 1.0
    assert close(br.log_likelihood(t, "factorial"), math.log(2 / 3))
    d, p = br.wilks_test(0.0, -1.0, 2)
    assert close(d, 2.0) and close(p, math.exp(-1.0))
    ks = br.ks_two_sample([1.0, 2.0, 3.0], [10.0, 11.0])
    assert ks.d_stat == 1.0

    cfg = br.design_sequential(0.05, 0.20, 0.5)
    assert (cfg.n_max, cfg.d_star) == (170, 26), cfg
    state = br.SequentialState(br.SequentialConfig(4))
    for outcome in "TTTT":
        status = state.record(outcome)
    assert status == "treatment_wins"
    try:
        state.record("C")
    except ValueError:
        pass
    else:
        raise AssertionError("recording on a stopped test must fail")

    report = br.run_benchmark(2, 1000, seed=1)
    assert len(report["cases"]) == 2

    try:
        br.BetaPosterior.from_counts(-1, 0)
    except ValueError:
        pass
    else:
        raise AssertionError("negative counts must fail")

    print("betarate smoke test passed")


if __name__ == "__main__":
    main()

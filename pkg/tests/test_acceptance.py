"""Acceptance gate: one test (and one PASS/FAIL line) per release criterion.

Run with ``pytest -v tests/test_acceptance.py``; each criterion appears
as a single test whose name states what it certifies.  Criterion 6 runs
the full default experiment sweep once (several minutes) and shares its
results with criterion 7.
"""

import math
import time

import numpy as np
import pytest

from pbda.bounds import (
    bound_coherent,
    dapbgd_gradient,
    dapbgd_objective,
    pbgd_bound,
    pbgd_gradient,
)
from pbda.cli import main as cli_main
from pbda.data import PairedSample, generate_moons, pair, rotate
from pbda.gibbs import (
    adaptation_loss_hat,
    disagreement_hat,
    gibbs_risk,
    mc_adaptation_loss,
    mc_disagreement,
    mc_gibbs_risk,
)
from pbda.kernel import (
    DualWeights,
    KernelConfig,
    dual_gradient,
    dual_objective,
    dual_pbgd_bound,
    dual_pbgd_gradient,
    gram,
)
from pbda.optimize import TrainConfig, train_dapbgd, train_pbgd
from pbda.special import kl_bernoulli, kl_inverse_sup, phi, phi_dis, xi


def check(criterion, ok, detail):
    print(f"[criterion {criterion}] {'PASS' if ok else 'FAIL'}: {detail}")
    assert ok, f"criterion {criterion}: {detail}"


def central_diff(f, x, eps=1e-6):
    g = np.empty_like(x)
    for i in range(x.shape[0]):
        e = np.zeros_like(x)
        e[i] = eps
        g[i] = (f(x + e) - f(x - e)) / (2.0 * eps)
    return g


# --- criterion 1 -----------------------------------------------------------


def test_criterion_1_special_function_identities():
    start = time.perf_counter()
    grid = np.linspace(-8.0, 8.0, 33)
    ok = (
        phi(0.0) == 0.5
        and float(np.max(np.abs(phi(grid) + phi(-grid) - 1.0))) < 1e-12
        and phi_dis(0.0) == 0.5
        and all(kl_bernoulli(q, q) == 0.0 for q in (0.0, 0.25, 0.5, 1.0))
        and all(
            abs(kl_bernoulli(q, kl_inverse_sup(q, c)) - c) < 1e-8
            for q, c in [(0.05, 0.02), (0.2, 0.1), (0.4, 0.3), (0.7, 0.05)]
        )
        and xi(1) == 2.0
        and xi(2) == 2.5
    )
    elapsed = time.perf_counter() - start
    check(1, ok and elapsed < 1.0, f"identities hold, runtime {elapsed:.3f}s < 1s")


# --- criterion 2 -----------------------------------------------------------


def _probe_configs():
    configs = []
    for seed in range(5):
        for d, m in [(2, 10), (2, 50), (5, 10), (5, 50)]:
            rng = np.random.default_rng(100 + 17 * seed + d + m)
            Xs = rng.standard_normal((m, d))
            Xt = rng.standard_normal((m, d)) + 0.3
            ys = np.where(rng.random(m) < 0.5, 1, -1)
            w = 0.5 * rng.standard_normal(d)
            configs.append((PairedSample(Xs, ys, Xt), w))
    return configs


def test_criterion_2_gradients_match_finite_differences():
    start = time.perf_counter()
    worst = 0.0
    for paired, w in _probe_configs():
        source = paired.source()
        g = pbgd_gradient(w, source)
        fd = central_diff(lambda v: pbgd_bound(v, source), w.copy())
        worst = max(worst, float(np.max(np.abs(g - fd)) / np.max(np.abs(fd))))

        g = dapbgd_gradient(w, paired)
        fd = central_diff(
            lambda v: dapbgd_objective(v, paired, with_gradient=False).objective, w.copy()
        )
        worst = max(worst, float(np.max(np.abs(g - fd)) / np.max(np.abs(fd))))

        cfg = KernelConfig("gaussian", 1.0)
        anchors = paired.Xs
        K = gram(anchors, cfg)
        rng = np.random.default_rng(paired.m)
        alpha = 0.2 * rng.standard_normal(anchors.shape[0])
        dw = DualWeights(alpha, anchors)

        g = dual_pbgd_gradient(dw, source, K, config=cfg)
        fd = central_diff(
            lambda a: dual_pbgd_bound(DualWeights(a, anchors), source, K, config=cfg),
            alpha.copy(),
        )
        worst = max(worst, float(np.max(np.abs(g - fd)) / np.max(np.abs(fd))))

        g = dual_gradient(dw, paired, K, config=cfg)
        fd = central_diff(
            lambda a: dual_objective(
                DualWeights(a, anchors), paired, K, config=cfg, with_gradient=False
            ).objective,
            alpha.copy(),
        )
        worst = max(worst, float(np.max(np.abs(g - fd)) / np.max(np.abs(fd))))
    elapsed = time.perf_counter() - start
    check(
        2,
        worst < 1e-4 and elapsed < 10.0,
        f"20 probe configs, worst relative error {worst:.3g} < 1e-4, "
        f"runtime {elapsed:.1f}s < 10s",
    )


# --- criterion 3 -----------------------------------------------------------


def test_criterion_3_closed_forms_match_monte_carlo():
    start = time.perf_counter()
    draws = 10**6
    tol = 3.5 / math.sqrt(draws) + 1e-3
    source = generate_moons(10, 0.05, seed=11)
    target = rotate(generate_moons(10, 0.05, seed=12), 30.0).unlabeled()
    paired = pair(source, target, seed=13)
    rng = np.random.default_rng(14)
    worst = 0.0
    for k in range(5):
        w = rng.standard_normal(2) * (0.5 + 0.5 * k)
        worst = max(
            worst,
            abs(gibbs_risk(w, source) - mc_gibbs_risk(w, source, draws, seed=k)),
            abs(disagreement_hat(w, paired) - mc_disagreement(w, paired, draws, seed=k)),
            abs(
                adaptation_loss_hat(w, paired)
                - mc_adaptation_loss(w, paired, draws, seed=k)
            ),
        )
    elapsed = time.perf_counter() - start
    check(
        3,
        worst < tol and elapsed < 60.0,
        f"5 probe models at 1e6 draws, worst deviation {worst:.5f} < {tol:.5f}, "
        f"runtime {elapsed:.1f}s < 60s",
    )


# --- criterion 4 -----------------------------------------------------------


def test_criterion_4_linear_dual_training_reproduces_primal():
    start = time.perf_counter()
    source = generate_moons(20, 0.05, seed=21)
    target = rotate(generate_moons(20, 0.05, seed=22), 30.0).unlabeled()
    paired = pair(source, target, seed=23)
    cfg = TrainConfig(max_iters=400, restarts=1, seed=0)
    basis = np.eye(2)
    linear = KernelConfig("linear")

    worst = 0.0
    for primal, dual in [
        (train_pbgd(source, cfg), train_pbgd(source, cfg, linear, anchors=basis)),
        (train_dapbgd(paired, cfg), train_dapbgd(paired, cfg, linear, anchors=basis)),
    ]:
        assert len(primal.trace) == len(dual.trace)
        worst = max(
            worst,
            max(
                abs(p.objective - d.objective)
                for p, d in zip(primal.trace, dual.trace)
            ),
        )
    elapsed = time.perf_counter() - start
    check(
        4,
        worst < 1e-6 and elapsed < 10.0,
        f"per-iteration objective gap {worst:.3g} < 1e-6 on 40-point moons, "
        f"runtime {elapsed:.1f}s < 10s",
    )


# --- criterion 5 -----------------------------------------------------------


def test_criterion_5_bound_coherence_on_trained_models():
    source = generate_moons(25, 0.05, seed=31)
    target = rotate(generate_moons(25, 0.05, seed=32), 40.0).unlabeled()
    paired = pair(source, target, seed=33)
    cfg = TrainConfig(max_iters=400, restarts=2, seed=0)

    trained = [
        ("primal", train_dapbgd(paired, cfg), None),
        ("gaussian g=0.5", train_dapbgd(paired, cfg, KernelConfig("gaussian", 0.5)),
         KernelConfig("gaussian", 0.5)),
        ("gaussian g=2", train_dapbgd(paired, cfg, KernelConfig("gaussian", 2.0)),
         KernelConfig("gaussian", 2.0)),
    ]
    details = []
    ok = True
    for name, report, kernel in trained:
        if kernel is None:
            rep = dapbgd_objective(report.model.w, paired, with_gradient=False)
        else:
            dw = report.model.weights
            K = gram(dw.anchors, kernel)
            rep = dual_objective(dw, paired, K, config=kernel, with_gradient=False)
        coherent = bound_coherent(rep.bstar, rep.objective, rep.kl_budget)
        in_range = 0.0 <= rep.bstar <= 1.0
        ok = ok and coherent and in_range
        details.append(f"{name}: bstar={rep.bstar:.4f} bound={rep.objective:.4f}")
    # B* stays in [0, 1] for arbitrary weights, not just trained ones
    rng = np.random.default_rng(34)
    for _ in range(50):
        w = rng.standard_normal(2) * 10.0
        rep = dapbgd_objective(w, paired, with_gradient=False)
        ok = ok and 0.0 <= rep.bstar <= 1.0
    check(5, ok, "kl(bstar || bound) within budget and bstar in [0,1]: " + "; ".join(details))


# --- criteria 6 and 7 (shared default experiment run) ----------------------


def _load_results(path):
    rows = {}
    for line in path.read_text().splitlines()[1:]:
        algo, angle, acc, risk, dis, bound, _ms = line.split(",")
        rows[(algo, float(angle))] = {
            "acc": float(acc),
            "risk": float(risk),
            "dis": float(dis),
            "bound": float(bound),
        }
    return rows


@pytest.fixture(scope="module")
def default_experiment(tmp_path_factory):
    out = tmp_path_factory.mktemp("default_experiment")
    start = time.perf_counter()
    code = cli_main(["experiment", "--out", str(out)])
    elapsed = time.perf_counter() - start
    assert code == 0
    return _load_results(out / "results.csv"), elapsed


def test_criterion_6a_pbgd_accuracy_at_20_degrees(default_experiment):
    results, elapsed = default_experiment
    acc = results[("pbgd", 20.0)]["acc"]
    check(
        "6a",
        acc >= 95.0 and elapsed < 600.0,
        f"pbgd accuracy {acc:.1f}% >= 95% at 20 deg "
        f"(default sweep took {elapsed:.0f}s < 600s)",
    )


def test_criterion_6b_adaptation_gain_at_30_and_40_degrees(default_experiment):
    results, _ = default_experiment
    gains = {
        angle: results[("dapbgd", angle)]["acc"] - results[("pbgd", angle)]["acc"]
        for angle in (30.0, 40.0)
    }
    collapse = results[("dapbgd", 50.0)]["acc"]
    print(f"[criterion 6b] dapbgd accuracy at 50 deg: {collapse:.1f}% (reported, not asserted)")
    check(
        "6b",
        all(g >= 5.0 for g in gains.values()),
        f"dapbgd - pbgd accuracy gain: {gains[30.0]:+.1f} points at 30 deg, "
        f"{gains[40.0]:+.1f} points at 40 deg (both must be >= +5)",
    )


def test_criterion_6c_pbgd_accuracy_nonincreasing_in_angle(default_experiment):
    results, _ = default_experiment
    accs = [results[("pbgd", angle)]["acc"] for angle in (20.0, 30.0, 40.0, 50.0)]
    ok = all(b <= a + 2.0 for a, b in zip(accs, accs[1:]))
    check(
        "6c",
        ok,
        "pbgd accuracy nonincreasing over angles 20-50 (2-point slack): "
        + ", ".join(f"{a:.1f}" for a in accs),
    )


def test_criterion_7_tradeoff_mechanism_at_30_degrees(default_experiment):
    start = time.perf_counter()
    results, _ = default_experiment
    da = results[("dapbgd", 30.0)]
    pb = results[("pbgd", 30.0)]
    elapsed = time.perf_counter() - start
    check(
        7,
        da["dis"] < pb["dis"] and da["risk"] >= pb["risk"] and elapsed < 60.0,
        f"at 30 deg dapbgd trades source risk for disagreement: "
        f"disagreement {da['dis']:.4f} < {pb['dis']:.4f}, "
        f"source Gibbs risk {da['risk']:.4f} >= {pb['risk']:.4f}",
    )


# --- criterion 8 -----------------------------------------------------------


def test_criterion_8_experiment_is_byte_deterministic(tmp_path):
    args = [
        "experiment", "--angles", "20,30", "--n", "25", "--repeats", "2",
        "--test-n", "50", "--kernel", "gaussian", "--gammas", "0.5,2",
        "--max-iters", "200", "--restarts", "1",
    ]
    a, b = tmp_path / "a", tmp_path / "b"
    assert cli_main(args + ["--out", str(a)]) == 0
    assert cli_main(args + ["--out", str(b)]) == 0
    names = sorted(p.name for p in a.iterdir())
    identical = names == sorted(p.name for p in b.iterdir()) and all(
        (a / n).read_bytes() == (b / n).read_bytes() for n in names
    )
    check(8, identical, f"two identical runs, byte-identical outputs: {', '.join(names)}")

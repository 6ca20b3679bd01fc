import numpy as np

from hsflow import fiber_g2
from hsflow import verify


def test_full_suite_passes():
    report = verify.run_suite(trials=200, seed=1)
    assert report["passed"]
    for name, entry in report["identities"].items():
        assert entry["max_residual"] <= entry["bound"], name


def test_corrupted_star_table_is_named(monkeypatch):
    # negative control: a corrupted 3-torus star table must fail exactly the
    # table identities, by name
    true_star = fiber_g2.star3_t3

    def corrupted(degree, coeffs, q, tol=1e-8):
        out = true_star(degree, coeffs, q, tol)
        return out + (0.01 if degree == 1 else 0.0)

    monkeypatch.setattr(fiber_g2, "star3_t3", corrupted)
    report = verify.run_suite(trials=5, seed=2)
    assert not report["passed"]
    failing = {k for k, v in report["identities"].items() if not v["passed"]}
    assert failing == {"t3-star-1forms"}


def test_corrupted_dual_breaks_lift(monkeypatch):
    from hsflow import triple_algebra as ta
    true_dual = ta.dual_triple

    def wrong_dual(triple, q):
        return np.einsum('...ik,...km->...im', q, triple)

    monkeypatch.setattr(ta, "dual_triple", wrong_dual)
    report = verify.run_suite(trials=10, seed=3)
    failing = {k for k, v in report["identities"].items() if not v["passed"]}
    assert "star7-dual-lift" in failing or "dual-gram-inverse" in failing

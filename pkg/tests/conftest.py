import numpy as np
import pytest

from certline import (
    Dataset,
    IrlsConfig,
    LineParams,
    OracleConfig,
    SyntheticSpec,
    canonicalize,
    generate,
    grid_search,
    kernels,
    run_irls,
)

# frozen scenario family: N=10 with 4 box outliers around y = 0.5 x + 1;
# seeds picked so unit-weight IRLS lands at the global minimum (pass) or in
# a local minimum (fail)
TRUE_LINE = canonicalize(LineParams(-0.5, 1.0, 1.0))
GOLDEN_PASS_SEED = 0
GOLDEN_FAIL_SEED = 20

DEEP_IRLS = IrlsConfig(max_iters=5000, cost_tol=1e-14)


def golden_spec(seed) -> SyntheticSpec:
    return SyntheticSpec(
        n_total=10,
        n_outliers=4,
        true_line=TRUE_LINE,
        inlier_noise_sigma=0.05,
        outlier_box=5.0,
        seed=seed,
    )


def random_dataset(rng, n, scale=3.0) -> Dataset:
    return Dataset(rng.uniform(-scale, scale, n), rng.uniform(-scale, scale, n))


def random_line(rng) -> LineParams:
    theta = rng.uniform(0.0, np.pi)
    c = rng.uniform(-3.0, 3.0)
    return canonicalize(LineParams(np.cos(theta), np.sin(theta), c))


@pytest.fixture(scope="session", autouse=True)
def _warm_kernels():
    kernels.warmup()


@pytest.fixture(scope="session")
def golden_pass():
    d, mask = generate(golden_spec(GOLDEN_PASS_SEED))
    irls = run_irls(d, DEEP_IRLS)
    oline, ocost = grid_search(d, OracleConfig())
    assert abs(irls.gm_cost_final - ocost) <= 1e-6
    return {"dataset": d, "mask": mask, "irls": irls, "oracle_line": oline,
            "oracle_cost": ocost}


@pytest.fixture(scope="session")
def golden_fail():
    d, mask = generate(golden_spec(GOLDEN_FAIL_SEED))
    irls = run_irls(d, DEEP_IRLS)
    oline, ocost = grid_search(d, OracleConfig())
    assert irls.gm_cost_final > ocost + 0.1
    return {"dataset": d, "mask": mask, "irls": irls, "oracle_line": oline,
            "oracle_cost": ocost}

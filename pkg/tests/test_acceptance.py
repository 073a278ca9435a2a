"""Acceptance criteria, one test per criterion, each printing a PASS line.

Run with `pytest tests/test_acceptance.py -s` to see the per-criterion
lines; every tolerance is pinned here, nothing is calibrated at run time.
"""

import time

import numpy as np
import pytest
import scipy.stats

import besov_invert.reconstruct as rc
from besov_invert.besov import (PriorSpec, empirical_exponential_moment,
                                moment_identity, norm_threshold_probe)
from besov_invert.experiments import (ProbeConfig, StudyConfig,
                                      appendix_example,
                                      run_convergence_study,
                                      run_stability_probe)
from besov_invert.forward import (ForwardSetup, apply_projection,
                                  synthesize_measurement)
from besov_invert.reconstruct import (PosteriorSpec, gaussian_cm, gibbs_l1,
                                      mh_fallback, quadrature_reconstructor,
                                      tikhonov_solve)
from besov_invert.wavelets import basis_function, build_basis, dwt, idwt

# criterion 7 regression: diagonal (256,256) error relative to the (512,512)
# reference, one frozen realization; computed 2.268e-14 at build time with
# seed 0 and doubled for floating-point headroom
FROZEN_DIAGONAL_REL_ERROR = 5e-14
FROZEN_STUDY_SEED = 0


def _report(num: int, ok: bool, detail: str):
    status = "PASS" if ok else "FAIL"
    print(f"[acceptance {num}] {status}: {detail}")
    assert ok, f"criterion {num}: {detail}"


@pytest.fixture(scope="module", autouse=True)
def _warm_numba():
    # JIT compilation happens once here so the timed criteria measure the
    # algorithms, not the compiler
    setup = ForwardSetup(d=1, grid_log2=3, proj_kind="fourier_trunc",
                         trunc_kind="wavelet_trunc", wavelet_family=1)
    prior = PriorSpec(kind="besov", d=1, J=3, s=1.0, p=1.0)
    spec = PosteriorSpec(prior=prior, setup=setup, alpha=1.0, n=2, k=8,
                         data=np.zeros(8))
    gibbs_l1(spec, iters=50, seed=0)
    mh_fallback(spec, iters=50, seed=0)


def test_criterion_1_gaussian_cm_equals_tikhonov():
    start = time.monotonic()
    worst = 0.0
    cases = [(1, 8, 0.05, 64, 128), (2, 6, 0.1, 16, 40)]
    for d, J, sigma, n_base, k_base in cases:
        setup = ForwardSetup(d=d, grid_log2=J, psf_sigma=sigma,
                             proj_kind="fourier_trunc",
                             trunc_kind="fourier_trunc")
        rng = np.random.default_rng(100 + d)
        for trial in range(10):
            u = rng.standard_normal(setup.grid_shape)
            n = n_base + 8 * trial
            k = min(k_base + 16 * trial, setup.grid_size)
            meas = synthesize_measurement(u, setup, "practical_mk", k=k,
                                          seed=trial)
            prior = PriorSpec(kind="gaussian_smoothness", d=d, J=J, alpha=0.4)
            spec = PosteriorSpec(prior=prior, setup=setup, alpha=0.4, n=n,
                                 k=k, data=meas)
            cm = gaussian_cm(spec).coefficients
            tik = tikhonov_solve(spec).coefficients
            rel = np.linalg.norm(cm - tik) / np.linalg.norm(cm)
            worst = max(worst, rel)
    elapsed = time.monotonic() - start
    _report(1, worst <= 1e-10 and elapsed < 10.0,
            f"20 instances, worst relative CM-Tikhonov gap {worst:.2e} "
            f"(tol 1e-10), {elapsed:.1f}s (limit 10s)")


def _sampler_instances():
    # 10 instances over n in {1,2,3} and p in {1,2}
    specs = []
    for idx in range(10):
        n = idx % 3 + 1
        p = 1.0 if idx < 6 else 2.0
        setup = ForwardSetup(d=1, grid_log2=3, psf_sigma=0.06 + 0.01 * (idx % 3),
                             proj_kind="fourier_trunc",
                             trunc_kind="wavelet_trunc", wavelet_family=1)
        rng = np.random.default_rng(idx)
        meas = synthesize_measurement(rng.standard_normal(8), setup,
                                      "practical_mk", k=6, seed=idx)
        prior = PriorSpec(kind="besov", d=1, J=3, s=1.0, p=p)
        specs.append(PosteriorSpec(prior=prior, setup=setup,
                                   alpha=0.6 + 0.1 * n, n=n, k=6, data=meas))
    return specs


def test_criterion_2_sampler_matches_quadrature_oracle():
    start = time.monotonic()
    worst_t = 0.0
    worst_se = 0.0
    for idx, spec in enumerate(_sampler_instances()):
        oracle = quadrature_reconstructor(spec).value
        if spec.prior.p == 1:
            chain = gibbs_l1(spec, iters=250000, burn_in=50000, seed=idx)
        else:
            chain = mh_fallback(spec, iters=250000, burn_in=50000, seed=idx)
        se = chain.standard_errors()
        t_stat = float(np.max(np.abs(chain.mean - oracle) / se))
        worst_t = max(worst_t, t_stat)
        worst_se = max(worst_se, float(se.max()))
        assert chain.samples.shape[0] == 200000
    elapsed = time.monotonic() - start
    _report(2, worst_t <= 3.0 and worst_se <= 0.01 and elapsed < 120.0,
            f"10 instances at 2e5 post-burn-in draws: worst |mean-oracle| "
            f"= {worst_t:.2f} MC SEs (tol 3), worst SE {worst_se:.4f} "
            f"(tol 0.01), {elapsed:.0f}s (limit 120s)")


def test_criterion_3_projection_invariance():
    # gaussian backend
    setup = ForwardSetup(d=1, grid_log2=7, psf_sigma=0.05,
                         proj_kind="fourier_trunc", trunc_kind="fourier_trunc")
    rng = np.random.default_rng(31)
    meas = synthesize_measurement(rng.standard_normal(128), setup,
                                  "practical_mk", k=24, seed=0)
    prior = PriorSpec(kind="gaussian_smoothness", d=1, J=7, alpha=0.3)
    base = gaussian_cm(PosteriorSpec(prior=prior, setup=setup, alpha=0.3,
                                     n=16, k=24, data=meas)).coefficients
    worst_gauss = 0.0
    for _ in range(10):
        noise = rng.standard_normal(128)
        ortho = noise - apply_projection(noise, setup, 24)
        moved = gaussian_cm(PosteriorSpec(
            prior=prior, setup=setup, alpha=0.3, n=16, k=24,
            data=meas.data + ortho, theta_form=True)).coefficients
        worst_gauss = max(worst_gauss, float(
            np.linalg.norm(moved - base) / max(np.linalg.norm(base), 1.0)))

    # sampler backend
    bsetup = ForwardSetup(d=1, grid_log2=4, psf_sigma=0.05,
                          proj_kind="fourier_trunc",
                          trunc_kind="wavelet_trunc", wavelet_family=1)
    bmeas = synthesize_measurement(rng.standard_normal(16), bsetup,
                                   "practical_mk", k=6, seed=1)
    bprior = PriorSpec(kind="besov", d=1, J=4, s=1.0, p=1.0)
    bspec = PosteriorSpec(prior=bprior, setup=bsetup, alpha=0.8, n=4, k=6,
                          data=bmeas)
    ref_chain = gibbs_l1(bspec, iters=40000, seed=5)
    se = ref_chain.standard_errors()
    worst_sampler = 0.0
    for _ in range(10):
        noise = rng.standard_normal(16)
        ortho = noise - apply_projection(noise, bsetup, 6)
        moved = gibbs_l1(PosteriorSpec(
            prior=bprior, setup=bsetup, alpha=0.8, n=4, k=6,
            data=bmeas.data + ortho, theta_form=True), iters=40000, seed=5)
        worst_sampler = max(worst_sampler, float(
            np.max(np.abs(moved.mean - ref_chain.mean) / se)))
    _report(3, worst_gauss <= 1e-10 and worst_sampler <= 1.0,
            f"10 orthogonal perturbations: gaussian estimate moved "
            f"{worst_gauss:.2e} (tol 1e-10), sampler mean moved "
            f"{worst_sampler:.3f} MC SEs (tol 1)")


def test_criterion_4_moment_identity():
    rng = np.random.default_rng(4)
    worst = 0.0
    checks = []
    for p in (1.0, 2.0):
        for k in (0.1, 0.5, 0.9):
            est, se = empirical_exponential_moment(p, k, 10 ** 6, rng)
            target = moment_identity(p, k)
            t_stat = abs(est - target) / se
            worst = max(worst, t_stat)
            checks.append((p, k, target))
    assert moment_identity(1.0, 0.5) == pytest.approx(2.0, abs=1e-15)
    _report(4, worst <= 4.0,
            f"E exp(k|X|^p) over k in (0.1,0.5,0.9) x p in (1,2) at 1e6 "
            f"draws: worst deviation {worst:.2f} SEs (tol 4); "
            f"(p=1,k=0.5) target 2 confirmed")


def test_criterion_5_norm_threshold_classification():
    ok = True
    details = []
    for s, p, d in ((1.0, 1.0, 2), (2.0, 2.0, 1)):
        below = norm_threshold_probe(s, p, d, s - d / p - 0.5,
                                     n_terms=10 ** 4, n_samples=100, seed=50)
        above = norm_threshold_probe(s, p, d, s - d / p + 0.5,
                                     n_terms=10 ** 4, n_samples=100, seed=51)
        ok &= below.verdict == "convergent" and above.verdict == "divergent"
        details.append(f"(s={s},p={p},d={d}): slopes "
                       f"{below.slope:.2f}/{above.slope:.2f}")
    _report(5, ok, "t = s-d/p-0.5 convergent, t = s-d/p+0.5 divergent; "
            + "; ".join(details))


def test_criterion_6_wavelet_correctness():
    worst_pr = 0.0
    count = 0
    for family in (2, 3, 4, 6, 8):
        for d in (1, 2):
            J = 7 if d == 1 else (3 if 2 * family <= 8 else 4)
            basis = build_basis(d, family, J)
            rng = np.random.default_rng(family * 10 + d)
            for _ in range(10):
                x = rng.standard_normal((2 ** J,) * d)
                err = np.abs(idwt(dwt(x, basis), basis) - x).max()
                worst_pr = max(worst_pr, err / np.abs(x).max())
                count += 1
    worst_gram = 0.0
    for d, J, family in ((1, 7, 4), (2, 3, 4)):
        basis = build_basis(d, family, J)
        vectors = np.stack([basis_function(ell, basis).ravel()
                            for ell in range(1, 65)])
        gram = vectors @ vectors.T / vectors.shape[1]
        worst_gram = max(worst_gram, np.abs(gram - np.eye(64)).max())
    _report(6, count == 100 and worst_pr <= 1e-12 and worst_gram <= 1e-10,
            f"perfect reconstruction on {count} fields (worst {worst_pr:.2e}, "
            f"tol 1e-12); 64-vector Gram deviation {worst_gram:.2e} (tol 1e-10)")


def test_criterion_7_convergence_study():
    start = time.monotonic()
    study = run_convergence_study(StudyConfig(
        d=1, grid_log2=9, psf="poly", psf_decay=1.5,
        prior_kind="gaussian_smoothness", seed=FROZEN_STUDY_SEED,
        n_ladder=(8, 16, 32, 64, 128, 256), k_ladder=(8, 16, 32, 64, 128, 256)))
    elapsed = time.monotonic() - start
    ladder = study.config.n_ladder
    k_max, n_max = max(study.config.k_ladder), max(ladder)
    errs_n = [study.cell(n, k_max).error for n in ladder]
    errs_k = [study.cell(n_max, k).error for k in study.config.k_ladder]
    mono = (all(errs_n[i + 1] < errs_n[i] for i in range(len(errs_n) - 1))
            and all(errs_k[i + 1] < errs_k[i] for i in range(len(errs_k) - 1)))
    diag = study.cell(256, 256).error / study.ref_norm
    _report(7, mono and diag < FROZEN_DIAGONAL_REL_ERROR and elapsed < 60.0,
            f"master grid 512, frozen seed {FROZEN_STUDY_SEED}: errors "
            f"monotone along both axes, diagonal relative error {diag:.2e} "
            f"(frozen bound {FROZEN_DIAGONAL_REL_ERROR:.0e}), "
            f"{elapsed:.0f}s (limit 60s)")


def test_criterion_8_appendix_limits():
    ex1 = appendix_example(1, n_ladder=(8, 16, 64, 256), n_samples=10,
                           phi="const", seed=80)
    ex1_ok = all(abs(r.exact - 1.0 / r.n) < 1e-14 for r in ex1.rows)
    ex2 = appendix_example(2, n_ladder=(256,), n_samples=10 ** 4,
                           phi="smooth", seed=81)
    ks_p = ex2.rows[0].extra["ks_pvalue"]
    ex2_ok = ks_p > 1e-3
    ex5 = appendix_example(5, n_ladder=(8, 16, 32, 64, 128, 256), phi="smooth",
                           seed=82)
    point = [r.extra["point_eval_variance"] for r in ex5.rows]
    ex5_ok = all(point[i + 1] > point[i] for i in range(len(point) - 1))
    _report(8, ex1_ok and ex2_ok and ex5_ok,
            f"Ex1 variance exactly 1/n; Ex2 KS p-value {ks_p:.3f} at n=256 "
            f"(level 1e-3); Ex5 point variance strictly increasing "
            f"({point[0]:.2f} -> {point[-1]:.2f})")


def test_criterion_9_stability_shape():
    laplace = run_stability_probe(ProbeConfig(
        backend="laplace_quadrature", grid_log2=4, k=4, wavelet_family=1,
        norm_ladder=(0.1, 1.0, 10.0), deltas=(1e-2, 1e-3, 1e-4), seed=90))
    env_ok = all(rec.ratio <= laplace.envelope(rec.norm_m) * (1 + 1e-9)
                 for rec in laplace.records)
    gamma_ok = np.isfinite(laplace.fitted_gamma) and laplace.fitted_gamma >= 0

    gauss = run_stability_probe(ProbeConfig(
        backend="gaussian", grid_log2=5, n=8, k=8,
        norm_ladder=(0.1, 1.0, 10.0), deltas=(1e-2, 1e-3, 1e-4), seed=91))
    worst_spread = 0.0
    by_dir = {}
    for rec in gauss.records:
        by_dir.setdefault(rec.direction, []).append(rec.ratio)
    for ratios in by_dir.values():
        worst_spread = max(worst_spread,
                           (max(ratios) - min(ratios)) / max(ratios))
    _report(9, env_ok and gamma_ok and worst_spread <= 1e-10,
            f"laplace ratios within fitted envelope (gamma = "
            f"{laplace.fitted_gamma:.2f}, finite); gaussian ratio constant to "
            f"{worst_spread:.2e} (tol 1e-10)")

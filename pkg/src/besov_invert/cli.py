"""Command-line driver.

Subcommands: sample-prior | forward | reconstruct | converge-study |
stability-probe | appendix-example | deblur-demo.  Every run writes its
resolved configuration and the library version into the output directory;
CSV artifacts are byte-deterministic in (config, seed).

Exit codes: 0 success, 2 configuration error, 3 numerical error,
4 capability error, 1 anything else.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import __version__, experiments, io_formats, plots, wavelets
from .besov import PriorSpec, sample_besov_prior, sample_gaussian_prior
from .config import RunConfig, echo_dict, parse_config
from .errors import CapabilityError, ConfigError, NumericalError
from .experiments import (DemoConfig, ProbeConfig, StudyConfig,
                          run_convergence_study, run_deblur_demo,
                          run_stability_probe, smooth_bump_truth)
from .forward import ForwardSetup, apply_projection, synthesize_measurement
from .reconstruct import PosteriorSpec, gaussian_cm, gibbs_l1

SUBCOMMANDS = ("sample-prior", "forward", "reconstruct", "converge-study",
               "stability-probe", "appendix-example", "deblur-demo")


def _resolved_trunc_kind(config: RunConfig) -> str:
    if config.trunc_kind != "auto":
        return config.trunc_kind
    return ("fourier_trunc" if config.prior == "gaussian_smoothness"
            else "wavelet_trunc")


def _setup_from(config: RunConfig) -> ForwardSetup:
    mult = None
    if config.psf == "poly":
        from . import fourier
        mult = fourier.helmholtz_symbol(
            config.dimension, 2 ** config.grid_log2) ** (-config.psf_decay)
    return ForwardSetup(d=config.dimension, grid_log2=config.grid_log2,
                        psf_sigma=config.sigma, multiplier=mult,
                        proj_kind=config.proj_kind,
                        trunc_kind=_resolved_trunc_kind(config),
                        noise_scale=config.noise_scale,
                        wavelet_family=config.wavelet_family)


def _prior_from(config: RunConfig) -> PriorSpec:
    if config.prior == "gaussian_smoothness":
        return PriorSpec(kind="gaussian_smoothness", d=config.dimension,
                         J=config.grid_log2, alpha=config.alpha,
                         order=config.order, seed=config.seed)
    return PriorSpec(kind="besov", d=config.dimension, J=config.grid_log2,
                     s=config.s, p=config.p, seed=config.seed)


def _truth_from(config: RunConfig, setup: ForwardSetup) -> np.ndarray:
    if config.truth == "zero":
        return np.zeros(setup.grid_shape)
    if config.truth == "bumps":
        return smooth_bump_truth(config.dimension, config.grid_log2)
    prior = _prior_from(config)
    if prior.kind == "gaussian_smoothness":
        return sample_gaussian_prior(prior, config.grid_log2)
    return wavelets.idwt(sample_besov_prior(prior, setup.basis()), setup.basis())


def _prepare_out(config: RunConfig) -> Path:
    out = Path(config.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    echo = {"version": __version__}
    echo.update(echo_dict(config))
    io_formats.write_keyvalue(out / "config_echo.txt", echo)
    return out


def _cmd_sample_prior(config: RunConfig) -> int:
    out = _prepare_out(config)
    setup = _setup_from(config)
    prior = _prior_from(config)
    if prior.kind == "besov":
        field = sample_besov_prior(prior, setup.basis())
        io_formats.write_coeff_file(out / "prior_sample.bcf", field)
        grid = wavelets.idwt(field, setup.basis())
    else:
        grid = sample_gaussian_prior(prior, config.grid_log2)
    io_formats.write_grid_file(out / "prior_sample.bgf", grid)
    plots.emit_field_image(grid, out, "prior_sample", config.make_png)
    return 0


def _cmd_forward(config: RunConfig) -> int:
    out = _prepare_out(config)
    setup = _setup_from(config)
    _check_capability(config, setup)
    truth = _truth_from(config, setup)
    io_formats.write_grid_file(out / "u_true.bgf", truth)
    meas = synthesize_measurement(truth, setup, config.measurement_kind,
                                  k=config.k, n=config.n, seed=config.seed)
    io_formats.write_measurement(out / "measurement", meas)
    plots.emit_field_image(meas.data, out, "measurement", config.make_png)
    return 0


def _check_capability(config: RunConfig, setup: ForwardSetup):
    if config.n > setup.grid_size:
        raise CapabilityError(
            f"n={config.n} exceeds the master grid size {setup.grid_size}"
        )
    if config.k > setup.grid_size:
        raise CapabilityError(
            f"k={config.k} exceeds the master grid size {setup.grid_size}"
        )


def _cmd_reconstruct(config: RunConfig) -> int:
    out = _prepare_out(config)
    setup = _setup_from(config)
    _check_capability(config, setup)
    if config.input_measurement:
        meas = io_formats.read_measurement(config.input_measurement)
        truth = None
    else:
        truth = _truth_from(config, setup)
        meas = synthesize_measurement(truth, setup, "practical_mk",
                                      k=config.k, seed=config.seed)
    prior = _prior_from(config)
    spec = PosteriorSpec(prior=prior, setup=setup, alpha=config.alpha,
                         n=config.n, k=config.k, data=meas)
    report = {
        "prior": prior.kind, "n": config.n, "k": config.k,
        "alpha": config.alpha, "seed": config.seed,
    }
    if prior.kind == "gaussian_smoothness":
        result = gaussian_cm(spec)
        estimate = result.grid
        report["residual"] = result.residual
    else:
        if config.p != 1:
            raise CapabilityError(
                "the reconstruct subcommand samples with gibbs_l1 and needs p = 1"
            )
        burn = None if config.mcmc_burn_in < 0 else config.mcmc_burn_in
        chain = gibbs_l1(spec, iters=config.mcmc_iters, burn_in=burn,
                         thin=config.mcmc_thin, seed=config.seed,
                         quantile_level=config.quantile_level)
        full = np.zeros(setup.grid_size)
        full[: config.n] = chain.mean
        estimate = wavelets.idwt(full, setup.basis())
        io_formats.write_chain_csv(out / "chain.csv", chain)
        io_formats.write_quantiles_csv(out / "quantiles.csv", chain)
        plots.emit_credible_band(chain, out, make_png=config.make_png)
        report["ess_min"] = float(chain.ess.min())
        report["mcmc_iters"] = config.mcmc_iters
    io_formats.write_grid_file(out / "estimate.bgf", estimate)
    if truth is not None:
        err = wavelets.grid_norm(estimate - truth) / max(wavelets.grid_norm(truth), 1e-300)
        report["rel_l2_error"] = err
    io_formats.write_keyvalue(out / "report.txt", report)
    plots.emit_field_image(estimate, out, "estimate", config.make_png)
    return 0


def _cmd_converge_study(config: RunConfig) -> int:
    out = _prepare_out(config)
    if max(*config.n_ladder, *config.k_ladder) > 2 ** (config.grid_log2 * config.dimension):
        raise CapabilityError("ladder exceeds the master grid")
    study_cfg = StudyConfig(
        d=config.dimension, grid_log2=config.grid_log2, sigma=config.sigma,
        psf=config.psf, psf_decay=config.psf_decay, prior_kind=config.prior,
        s=config.s, p=config.p, alpha=config.alpha, order=config.order,
        proj_kind=config.proj_kind, trunc_kind=_resolved_trunc_kind(config),
        wavelet_family=config.wavelet_family, n_ladder=config.n_ladder,
        k_ladder=config.k_ladder, noise_scale=config.noise_scale,
        seed=config.seed, u_true_kind=config.truth,
        mcmc_iters=config.mcmc_iters, mcmc_thin=config.mcmc_thin)
    study = run_convergence_study(study_cfg)
    io_formats.write_study_csv(out / "study.csv", study)
    io_formats.write_keyvalue(out / "study_report.txt", {
        "header": study.header,
        "ref_n": study.ref_n, "ref_k": study.ref_k,
        "ref_norm": study.ref_norm,
        "fit_n_slope": study.fit_n[0], "fit_n_intercept": study.fit_n[1],
        "fit_k_slope": study.fit_k[0], "fit_k_intercept": study.fit_k[1],
        "seed": config.seed,
    })
    plots.emit_study_plots(study, out, config.make_png)
    return 0


def _cmd_stability_probe(config: RunConfig) -> int:
    out = _prepare_out(config)
    probe_cfg = ProbeConfig(
        backend=config.backend, d=config.dimension, grid_log2=config.grid_log2,
        sigma=config.sigma, alpha=config.alpha, s=config.s, n=config.n,
        k=config.k, norm_ladder=config.norm_ladder, deltas=config.deltas,
        n_directions=config.n_directions, seed=config.seed,
        wavelet_family=config.wavelet_family)
    probe = run_stability_probe(probe_cfg)
    io_formats.write_probe_csv(out / "probe.csv", probe)
    io_formats.write_keyvalue(out / "probe_report.txt", {
        "backend": probe.config.backend,
        "fitted_c": probe.fitted_c,
        "fitted_gamma": probe.fitted_gamma,
        "seed": config.seed,
    })
    plots.emit_probe_plot(probe, out, config.make_png)
    return 0


def _cmd_appendix_example(config: RunConfig) -> int:
    out = _prepare_out(config)
    ladders = {5: (8, 16, 32, 64)}
    report = experiments.appendix_example(
        config.example, n_ladder=ladders.get(config.example, (8, 16, 32, 64, 128, 256)),
        n_samples=config.n_samples, seed=config.seed, phi=config.phi)
    rows = []
    for row in report.rows:
        extras = ";".join(f"{k}:{io_formats.format_value(v)}"
                          for k, v in sorted(row.extra.items()))
        rows.append((row.n, row.value,
                     "" if row.exact is None else row.exact, extras))
    io_formats.write_csv(out / "example.csv", "n,value,exact,extra", rows)
    io_formats.write_keyvalue(out / "example_report.txt", {
        "which": report.which,
        "description": report.description,
        "limit": "" if report.limit is None else report.limit,
        "seed": config.seed,
    })
    return 0


def _cmd_deblur_demo(config: RunConfig) -> int:
    out = _prepare_out(config)
    demo_cfg = DemoConfig(
        d=config.dimension, grid_log2=config.grid_log2, sigma=config.sigma,
        noise_scale=config.noise_scale, alpha_gaussian=config.alpha_gaussian,
        alpha_besov=config.alpha_besov, s=config.s, nk_pairs=config.nk_pairs,
        gibbs_iters=config.mcmc_iters, gibbs_thin=config.mcmc_thin,
        seed=config.seed, wavelet_family=config.wavelet_family,
        quantile_level=config.quantile_level)
    report = run_deblur_demo(demo_cfg)
    io_formats.write_grid_file(out / "u_true.bgf", report.u_true)
    io_formats.write_grid_file(out / "datum.bgf", report.datum)
    rows = [(c.prior, c.n, c.k, c.rel_l2_error, c.l1_coeff_norm, c.ess_min)
            for c in report.cells]
    io_formats.write_csv(out / "demo_errors.csv",
                         "prior,n,k,rel_l2_error,l1_coeff_norm,ess_min", rows)
    io_formats.write_keyvalue(out / "demo_report.txt", {
        "seed": config.seed,
        "cells": len(report.cells),
        "sigma": config.sigma,
        "noise_scale": config.noise_scale,
    })
    for cell in report.cells:
        io_formats.write_grid_file(
            out / f"estimate_{cell.prior}_n{cell.n}_k{cell.k}.bgf", cell.estimate)
        plots.emit_field_image(cell.estimate, out,
                               f"estimate_{cell.prior}_n{cell.n}_k{cell.k}",
                               config.make_png)
    plots.emit_field_image(report.u_true, out, "u_true", config.make_png)
    return 0


_HANDLERS = {
    "sample-prior": _cmd_sample_prior,
    "forward": _cmd_forward,
    "reconstruct": _cmd_reconstruct,
    "converge-study": _cmd_converge_study,
    "stability-probe": _cmd_stability_probe,
    "appendix-example": _cmd_appendix_example,
    "deblur-demo": _cmd_deblur_demo,
}


def dispatch(subcommand: str, config: RunConfig) -> int:
    if subcommand not in _HANDLERS:
        raise ConfigError(f"unknown subcommand {subcommand!r}")
    return _HANDLERS[subcommand](config)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="besov-invert",
        description="Discretization-invariant Bayesian inversion on the torus")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="subcommand", required=True)
    for name in SUBCOMMANDS:
        cmd = sub.add_parser(name)
        cmd.add_argument("--config", default=None, help="key=value config file")
        cmd.add_argument("--set", dest="overrides", action="append", default=[],
                         metavar="KEY=VALUE", help="override a config field")
        cmd.add_argument("--out", default=None, help="output directory")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    overrides = list(args.overrides)
    if args.out is not None:
        overrides.append(f"out_dir={args.out}")
    try:
        config = parse_config(args.config, overrides)
        return dispatch(args.subcommand, config)
    except ConfigError as exc:
        print(f"besov-invert: configuration error: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"besov-invert: numerical error: {exc}", file=sys.stderr)
        return 3
    except CapabilityError as exc:
        print(f"besov-invert: capability error: {exc}", file=sys.stderr)
        return 4
    except Exception as exc:  # pragma: no cover - defensive catch-all
        print(f"besov-invert: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

"""Plot-data emission: gnuplot-ready .dat files always, PNG when a raster
backend imports cleanly.  The CSV/dat artifacts never depend on the
graphics stack."""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .io_formats import format_value


def _write_dat(path, header: str, rows):
    lines = [f"# {header}"]
    for row in rows:
        lines.append(" ".join(format_value(v) for v in row))
    Path(path).write_text("\n".join(lines) + "\n")


def _png_backend():
    try:
        import matplotlib
        matplotlib.use("Agg", force=True)
        import matplotlib.pyplot as plt
        return plt
    except Exception:
        return None


def emit_study_plots(study, out_dir, make_png: bool = True) -> list:
    """Two log-log curve files (error vs n at k_max, error vs k at n_max)
    and one heatmap file; PNGs alongside when rasterization is available."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    cfg = study.config
    n_max, k_max = max(cfg.n_ladder), max(cfg.k_ladder)
    by_nk = {(c.n, c.k): c.error for c in study.cells}
    curve_n = [(n, by_nk[(n, k_max)]) for n in cfg.n_ladder]
    curve_k = [(k, by_nk[(n_max, k)]) for k in cfg.k_ladder]
    heat = [(n, k, by_nk[(n, k)]) for n in cfg.n_ladder for k in cfg.k_ladder]
    paths = [out / "error_vs_n.dat", out / "error_vs_k.dat", out / "error_heatmap.dat"]
    _write_dat(paths[0], f"n error(k={k_max})", curve_n)
    _write_dat(paths[1], f"k error(n={n_max})", curve_k)
    _write_dat(paths[2], "n k error", heat)

    plt = _png_backend() if make_png else None
    if plt is not None:
        fig, axes = plt.subplots(1, 2, figsize=(9, 3.5))
        for ax, curve, label in ((axes[0], curve_n, "n"), (axes[1], curve_k, "k")):
            xs, ys = zip(*curve)
            ax.loglog(xs, ys, "o-")
            ax.set_xlabel(label)
            ax.set_ylabel("error")
        fig.tight_layout()
        fig.savefig(out / "error_curves.png", dpi=120)
        plt.close(fig)
        grid = np.array([[by_nk[(n, k)] for k in cfg.k_ladder] for n in cfg.n_ladder])
        fig, ax = plt.subplots(figsize=(4.5, 4))
        img = ax.imshow(np.log10(np.maximum(grid, 1e-300)), origin="lower", cmap="viridis")
        ax.set_xlabel("k index")
        ax.set_ylabel("n index")
        fig.colorbar(img, label="log10 error")
        fig.savefig(out / "error_heatmap.png", dpi=120)
        plt.close(fig)
        paths += [out / "error_curves.png", out / "error_heatmap.png"]
    return [str(p) for p in paths]


def emit_probe_plot(probe, out_dir, make_png: bool = True) -> list:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    rows = [(r.norm_m, r.delta, r.ratio) for r in probe.records]
    path = out / "stability_ratios.dat"
    _write_dat(path, "norm_m delta ratio", rows)
    paths = [str(path)]
    plt = _png_backend() if make_png else None
    if plt is not None:
        fig, ax = plt.subplots(figsize=(5, 3.5))
        norms = sorted({r.norm_m for r in probe.records})
        for nm in norms:
            ratios = [r.ratio for r in probe.records if r.norm_m == nm]
            ax.semilogx([nm] * len(ratios), ratios, "o", alpha=0.6)
        xs = np.logspace(np.log10(min(norms)), np.log10(max(norms)), 64)
        ax.plot(xs, [probe.envelope(x) for x in xs], "k--", label="fitted envelope")
        ax.set_xlabel("||m||")
        ax.set_ylabel("difference quotient")
        ax.legend()
        fig.tight_layout()
        fig.savefig(out / "stability_ratios.png", dpi=120)
        plt.close(fig)
        paths.append(str(out / "stability_ratios.png"))
    return paths


def emit_credible_band(chain, out_dir, name: str = "credible_band",
                       make_png: bool = True) -> list:
    """Per-coordinate mean and quantile band of a chain."""
    if chain.samples.shape[0] == 0:
        raise ValueError("refusing to plot an empty chain")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    rows = [(i + 1, chain.coordinate_quantiles[i, 0], chain.mean[i],
             chain.coordinate_quantiles[i, 1]) for i in range(chain.mean.size)]
    path = out / f"{name}.dat"
    _write_dat(path, "ell lo mean hi", rows)
    paths = [str(path)]
    plt = _png_backend() if make_png else None
    if plt is not None:
        fig, ax = plt.subplots(figsize=(6, 3.5))
        idx = np.arange(1, chain.mean.size + 1)
        ax.fill_between(idx, chain.coordinate_quantiles[:, 0],
                        chain.coordinate_quantiles[:, 1], alpha=0.3,
                        label=f"{chain.quantile_level:.0%} band")
        ax.plot(idx, chain.mean, "k-", lw=1, label="posterior mean")
        ax.set_xlabel("coefficient index")
        ax.legend()
        fig.tight_layout()
        fig.savefig(out / f"{name}.png", dpi=120)
        plt.close(fig)
        paths.append(str(out / f"{name}.png"))
    return paths


def emit_field_image(field: np.ndarray, out_dir, name: str,
                     make_png: bool = True) -> list:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = []
    plt = _png_backend() if make_png else None
    if plt is not None:
        fig, ax = plt.subplots(figsize=(5, 3.5))
        if field.ndim == 1:
            ax.plot(np.arange(field.size) / field.size, field)
        else:
            img = ax.imshow(field, origin="lower", cmap="gray")
            fig.colorbar(img)
        ax.set_title(name)
        fig.tight_layout()
        fig.savefig(out / f"{name}.png", dpi=120)
        plt.close(fig)
        paths.append(str(out / f"{name}.png"))
    return paths

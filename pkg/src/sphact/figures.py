"""Matplotlib renderers for the CLI report paths.

Each CLI command that writes a delimited report also renders a companion
figure next to it.  Rendering is deterministic: fixed Agg backend, fixed
sizes and dpi, no timestamps in the output metadata.
"""

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)
import numpy as np  # noqa: E402

_SAVE = dict(dpi=110, bbox_inches="tight")


def _finish(fig, path):
    fig.savefig(path, **_SAVE)
    plt.close(fig)


def render_table(rows, path):
    dims = sorted({r["n"] for r in rows})
    fig, axes = plt.subplots(1, len(dims), figsize=(5.5 * len(dims), 3.6), squeeze=False)
    for ax, n in zip(axes[0], dims):
        sub = [r for r in rows if r["n"] == n]
        names = [r["activation"] for r in sub]
        idx = np.arange(len(sub))
        ax.bar(idx - 0.2, [r["T_empirical"] for r in sub], width=0.4, label="T = min g'")
        ax.bar(idx + 0.2, [r["g_at_1"] for r in sub], width=0.4, label="g(1)")
        cert = [r["T_certified"] for r in sub]
        mask = [i for i, c in enumerate(cert) if c is not None]
        if mask:
            ax.scatter([idx[i] - 0.2 for i in mask], [cert[i] for i in mask],
                       marker="_", s=220, color="k", label="certified lower bound")
        ax.set_xticks(idx)
        ax.set_xticklabels(names, rotation=30, ha="right")
        ax.set_title(f"S^{n}")
        ax.legend(fontsize=8)
    _finish(fig, path)


def render_decompose(rows, path):
    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    pairs = sorted({(r["activation"], r["n"]) for r in rows})
    for name, n in pairs:
        sub = sorted((r for r in rows if r["activation"] == name and r["n"] == n),
                     key=lambda r: r["k"])
        ks = [r["k"] for r in sub]
        mags = [max(abs(r["a_k"]), 1e-18) for r in sub]
        ax.semilogy(ks, mags, marker="o", ms=3, label=f"{name}, n={n}")
    ax.set_xlabel("degree k")
    ax.set_ylabel("|a_k|")
    ax.legend(fontsize=8)
    _finish(fig, path)


def render_plot_data(rows, path, activation="", n=None):
    t = [r["t"] for r in rows]
    fig, axes = plt.subplots(1, 3, figsize=(12.5, 3.4))
    axes[0].plot(t, [r["theta"] for r in rows], label="theta")
    axes[0].plot(t, [r["approx"] for r in rows], "--", label="truncated series")
    axes[0].legend(fontsize=8)
    axes[0].set_title(f"{activation} on S^{n}")
    axes[1].plot(t, [r["g"] for r in rows])
    axes[1].set_title("g(t)")
    axes[2].plot(t, [r["gprime"] for r in rows])
    axes[2].axhline(0.0, color="k", lw=0.6)
    axes[2].set_title("g'(t)")
    for ax in axes:
        ax.set_xlabel("t")
    _finish(fig, path)


def render_frame_check(rows, path):
    fig, ax = plt.subplots(figsize=(7.0, 3.8))
    labels = [f"{r['design']}\nk={r['k']}" for r in rows]
    residuals = [max(r["residual"], 1e-18) for r in rows]
    colors = ["tab:blue" if r["pass"] else "tab:red" for r in rows]
    ax.bar(np.arange(len(rows)), residuals, color=colors)
    ax.set_yscale("log")
    ax.axhline(1e-9, color="k", ls="--", lw=0.8)
    ax.set_xticks(np.arange(len(rows)))
    ax.set_xticklabels(labels, fontsize=7)
    ax.set_ylabel("Gram idempotency residual / c")
    _finish(fig, path)


def render_verify_theorem(rows, path):
    fig, ax = plt.subplots(figsize=(4.6, 4.2))
    x = [r["guaranteed_corr"] for r in rows]
    y = [r["min_found_corr"] for r in rows]
    ok = [r["pass"] for r in rows]
    ax.scatter(x, y, c=["tab:blue" if p else "tab:red" for p in ok], s=18)
    lo = min(x + y + [0.0])
    ax.plot([lo, 1.0], [lo, 1.0], "k--", lw=0.8)
    ax.set_xlabel("guaranteed correlation 1 - 2e/(T+e)")
    ax.set_ylabel("worst found |x_hat . x#|")
    _finish(fig, path)


def render_synthetic(rows, path):
    acts = sorted({r["activation"] for r in rows})
    fig, axes = plt.subplots(1, 2, figsize=(10.5, 3.8))
    for name in acts:
        sub = sorted((r for r in rows if r["activation"] == name),
                     key=lambda r: r["noise_level"])
        lv = np.array([r["noise_level"] for r in sub])
        md = np.array([r["mean_dist"] for r in sub])
        sd = np.array([r["std_dist"] for r in sub])
        mc = np.array([r["mean_corr"] for r in sub])
        sc = np.array([r["std_corr"] for r in sub])
        axes[0].plot(lv, md, marker="o", ms=3, label=name)
        axes[0].fill_between(lv, md - sd, md + sd, alpha=0.2)
        axes[1].plot(lv, mc, marker="o", ms=3, label=name)
        axes[1].fill_between(lv, mc - sc, mc + sc, alpha=0.2)
    axes[0].set_xlabel("noise level ||eta|| / ||G(x#)||")
    axes[0].set_ylabel("||G(x_hat) - G(x#)||")
    axes[1].set_xlabel("noise level ||eta|| / ||G(x#)||")
    axes[1].set_ylabel("<x_hat, x#>")
    axes[0].legend(fontsize=8)
    _finish(fig, path)

"""Figure rendering for the report paths (headless matplotlib).

Each CLI report that writes a CSV also renders a companion PNG next to it;
pass --no-plots to skip rendering.  Figures are presentation aids only: the
CSV is the deterministic artifact.
"""

import math


def _plt():
    import matplotlib

    matplotlib.use("Agg", force=False)
    import matplotlib.pyplot as plt

    return plt


def slack_histogram(values, path, title, xlabel="slack"):
    plt = _plt()
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.hist(values, bins=40, color="#33658a", alpha=0.85)
    ax.axvline(0.0, color="#d1495b", lw=1.2)
    ax.set_xlabel(xlabel)
    ax.set_ylabel("count")
    ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)


def gridfunction_figure(gf, path, title, exact=None):
    plt = _plt()
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(gf.nodes, gf.values, "-", color="#33658a", lw=1.5, label="computed")
    if exact is not None:
        ax.plot(gf.nodes, exact, "--", color="#d1495b", lw=1.2, label="reference")
        ax.legend(frameon=False)
    ax.set_xlabel("t")
    ax.set_ylabel("value")
    ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)


def iteration_figure(history, path, title):
    plt = _plt()
    its = [row["iter"] for row in history]
    ens = [row["energy"] for row in history]
    res = [max(row["residual"], 1e-18) for row in history]
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9, 4))
    ax1.plot(its, ens, "-", color="#33658a")
    ax1.set_xlabel("iteration")
    ax1.set_ylabel("path-max energy")
    ax2.semilogy(its, res, "-", color="#d1495b")
    ax2.set_xlabel("iteration")
    ax2.set_ylabel("weak residual")
    fig.suptitle(title)
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)


def convergence_figure(ns, errors, order, path, title):
    plt = _plt()
    fig, ax = plt.subplots(figsize=(6, 4))
    hs = [1.0 / n for n in ns]
    ax.loglog(hs, errors, "o-", color="#33658a", label="max-node error")
    if errors and errors[0] > 0:
        ref = [errors[0] * (h / hs[0]) ** order for h in hs]
        ax.loglog(hs, ref, "--", color="#999999", label=f"slope {order:g}")
    ax.set_xlabel("h")
    ax.set_ylabel("error")
    ax.legend(frameon=False)
    ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)


def nfunction_figure(nf, path):
    import numpy as np

    plt = _plt()
    s = np.geomspace(1e-3, 1e3, 300)
    with np.errstate(all="ignore"):
        G = np.asarray(nf.G(s), float)
        g = np.asarray(nf.g(s), float)
        ratio = s * g / G
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9, 4))
    ok = np.isfinite(G) & np.isfinite(g)
    ax1.loglog(s[ok], G[ok], color="#33658a", label="G")
    ax1.loglog(s[ok], g[ok], color="#d1495b", label="g")
    ax1.set_xlabel("s")
    ax1.legend(frameon=False)
    okr = np.isfinite(ratio)
    ax2.semilogx(s[okr], ratio[okr], color="#33658a")
    if math.isfinite(nf.g_plus):
        ax2.axhline(nf.g_plus, color="#999999", ls="--", lw=1)
    ax2.axhline(nf.g_minus, color="#999999", ls="--", lw=1)
    ax2.set_xlabel("s")
    ax2.set_ylabel("s g(s) / G(s)")
    fig.suptitle(nf.spec())
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)

"""PNG figures written next to the JSON/CSV outputs (Agg backend)."""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

plt.rc("figure", figsize=(6, 3.5), dpi=120)
plt.rc("axes", linewidth=0.6, grid=True)
plt.rc("grid", linewidth=0.3, alpha=0.5)
plt.rc("font", size=9)
plt.rc("savefig", bbox="tight")


def _save(fig, path: Path) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    # fixed metadata keeps the bytes reproducible
    fig.savefig(path, metadata={"Software": None})
    plt.close(fig)
    return path


def plot_psi(values: np.ndarray, path: Path, title: str = "") -> Path:
    n = np.nonzero(values)[0] + 1
    fig, ax = plt.subplots()
    ax.vlines(n, 0, values[n - 1], linewidth=0.3, color="C0")
    ax.set_xlabel("n")
    ax.set_ylabel("Psi(n)")
    ax.set_title(title or f"{len(n)} nonzero values on 1..{len(values)}")
    return _save(fig, path)


def cosine_grid(poly, min_points: int = 1 << 12) -> tuple[np.ndarray, np.ndarray]:
    """T(k/G) for k = 0..G/2 by one real FFT, G a power of two above twice the top shift."""
    top = int(np.max(poly.shifts, initial=1))
    G = 1 << max(int(np.ceil(np.log2(max(2 * top + 2, 2 * min_points)))), 1)
    buf = np.zeros(G)
    np.add.at(buf, np.asarray(poly.shifts) % G, poly.coeffs)
    return np.arange(G // 2 + 1) / G, poly.a0 + np.fft.rfft(buf).real


def plot_cosine(poly, path: Path, certified_min: float | None = None) -> Path:
    """T(x) on [0, 1/2]."""
    x, y = cosine_grid(poly)
    fig, ax = plt.subplots()
    ax.plot(x, y, linewidth=0.5)
    ax.axhline(0, color="k", linewidth=0.6)
    if certified_min is not None:
        ax.axhline(certified_min, color="C3", linestyle="--", linewidth=0.6, label=f"certified min {certified_min:.3g}")
        ax.legend(loc="upper right", frameon=False)
    ax.set_xlabel("x")
    ax.set_ylabel("T(x)")
    ax.set_title(f"a0 = {poly.a0:.6g}")
    return _save(fig, path)


def plot_comparison(rows: Sequence, path: Path) -> Path:
    N = [r.N for r in rows]
    fig, ax = plt.subplots()
    ax.plot(N, [r.delta / r.N for r in rows], "o-", markersize=2.5, linewidth=0.8, label="delta(N)/N")
    ax.plot(N, [2 * r.gamma for r in rows], "s-", markersize=2.5, linewidth=0.8, label="2 gamma(N)")
    ax.set_xlabel("N")
    ax.legend(frameon=False)
    return _save(fig, path)


def plot_trends(series: dict[str, Sequence[float]], path: Path) -> Path:
    fig, ax = plt.subplots()
    for name, vals in series.items():
        v = np.asarray(vals, dtype=float)
        ax.semilogy(np.arange(1, len(v) + 1), v / v[0], "o-", markersize=3, linewidth=0.8, label=name)
    ax.set_xlabel("sweep step")
    ax.set_ylabel("value / first value")
    ax.legend(frameon=False, fontsize=7)
    return _save(fig, path)

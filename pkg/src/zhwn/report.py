"""Figure rendering for reports: every eval/stats path writes a PNG next
to its delimited output.

Uses the Agg backend and strips the Software metadata chunk so figure
bytes are reproducible run to run.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .synsets import POS_LETTERS, POS_NAMES

_SAVE = {"dpi": 120, "metadata": {"Software": None}}


def _ascii_labels(labels):
    """Tick-safe labels: common fonts lack CJK glyphs, so non-ASCII names
    become indexed placeholders (the TSV keeps the real ones)."""
    return [
        label if label.isascii() else f"t{i + 1}"
        for i, label in enumerate(labels)
    ]


def save_coverage_figure(report, path) -> None:
    """Grouped bars: concepts vs translated per POS, ratios annotated."""
    names = [POS_NAMES[pos] for pos in POS_LETTERS]
    concepts = [report.per_pos[pos].concepts for pos in POS_LETTERS]
    translated = [report.per_pos[pos].translated for pos in POS_LETTERS]
    x = range(len(names))
    fig, ax = plt.subplots(figsize=(7, 4))
    ax.bar([i - 0.2 for i in x], concepts, width=0.4, label="concepts")
    ax.bar([i + 0.2 for i in x], translated, width=0.4, label="translated")
    for i, pos in enumerate(POS_LETTERS):
        ax.annotate(f"{report.per_pos[pos].ratio:.2f}", (i + 0.2, translated[i]),
                    ha="center", va="bottom", fontsize=8)
    ax.set_xticks(list(x), names)
    ax.set_ylabel("synsets")
    ax.set_title(f"coverage (total ratio {report.total.ratio:.3f})")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, **_SAVE)
    plt.close(fig)


def save_screening_figure(outcomes, summary, path) -> None:
    """Magnitude histogram plus kept/dropped/deferred totals."""
    magnitudes = [m for o in outcomes for m in o.magnitudes.values()]
    total = summary.total()
    fig, (left, right) = plt.subplots(1, 2, figsize=(9, 4))
    if magnitudes:
        left.hist(magnitudes, bins=min(30, max(5, len(magnitudes) // 2)))
    left.set_xlabel("|projected point|")
    left.set_ylabel("candidates")
    left.set_title("2D magnitudes")
    keys = ["kept", "dropped", "deferred"]
    right.bar(keys, [total[k] for k in keys])
    right.set_title("screening outcome")
    fig.tight_layout()
    fig.savefig(path, **_SAVE)
    plt.close(fig)


def save_projection_figure(outcome, path) -> None:
    """Scatter of one synset's candidates: magnitude per lemma, kept vs dropped."""
    fig, ax = plt.subplots(figsize=(5, 5))
    for rank, (lemma, mag) in enumerate(sorted(outcome.magnitudes.items()), start=1):
        kept = lemma in outcome.kept
        ax.scatter([rank], [mag], c="tab:blue" if kept else "tab:red")
        ax.annotate(f"l{rank}", (rank, mag), xytext=(4, 4), textcoords="offset points")
    ax.set_xlabel("candidate")
    ax.set_ylabel("distance to origin")
    ax.set_title(str(outcome.synset))
    fig.tight_layout()
    fig.savefig(path, **_SAVE)
    plt.close(fig)


def save_classification_figure(counts: dict, path) -> None:
    """Bars for the three expansion categories plus the report buckets."""
    keys = list(counts)
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.bar(keys, [counts[k] for k in keys])
    for i, key in enumerate(keys):
        ax.annotate(str(counts[key]), (i, counts[key]), ha="center", va="bottom")
    ax.set_ylabel("synsets")
    ax.set_title("expansion categories")
    fig.tight_layout()
    fig.savefig(path, **_SAVE)
    plt.close(fig)


def save_relatedness_figure(report, path) -> None:
    fig, ax = plt.subplots(figsize=(5, 4))
    metrics = [("R", report.recall), ("P", report.precision), ("F", report.f)]
    ax.bar([m[0] for m in metrics], [m[1] for m in metrics])
    for i, (_name, value) in enumerate(metrics):
        ax.annotate(f"{value:.4f}", (i, value), ha="center", va="bottom")
    ax.set_ylim(0, 1.05)
    ax.set_title(f"relatedness on {report.label} (ng={report.ng})")
    fig.tight_layout()
    fig.savefig(path, **_SAVE)
    plt.close(fig)


def save_similarity_figure(report, path) -> None:
    fig, ax = plt.subplots(figsize=(5, 4))
    hits = [(r["human"], r["msim"]) for r in report.rows if not r["miss"]]
    missed = [(r["human"], 0.0) for r in report.rows if r["miss"]]
    if hits:
        ax.scatter([h[0] for h in hits], [h[1] for h in hits], label="scored")
    if missed:
        ax.scatter([m[0] for m in missed], [m[1] for m in missed],
                   marker="x", c="tab:red", label="miss (0)")
    ax.set_xlabel("human score")
    ax.set_ylabel("msim")
    rho = "undefined" if report.spearman_all is None else f"{report.spearman_all:.4f}"
    ax.set_title(f"{report.label}: spearman {rho}")
    if hits or missed:
        ax.legend()
    fig.tight_layout()
    fig.savefig(path, **_SAVE)
    plt.close(fig)


def save_wsd_figure(result, path) -> None:
    fig, ax = plt.subplots(figsize=(max(5, len(result.per_type)), 4))
    types = sorted(result.per_type)
    accuracies = [result.per_type[t][0] / result.per_type[t][1] for t in types]
    ax.bar(range(len(types)), accuracies)
    ax.set_xticks(range(len(types)), _ascii_labels(types), rotation=45, ha="right")
    ax.axhline(result.micro, color="tab:orange", linestyle="--",
               label=f"micro {result.micro:.4f}")
    ax.axhline(result.macro, color="tab:green", linestyle=":",
               label=f"macro {result.macro:.4f}")
    ax.set_ylim(0, 1.05)
    ax.set_ylabel("accuracy")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, **_SAVE)
    plt.close(fig)

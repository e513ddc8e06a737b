"""Figure rendering for persona reports.

The card report path can emit matplotlib figures next to its delimited
coverage table: topic coverage bars, monthly evidence volume, and channel
mix over the persona's member artifacts. Files only; no interactive
backends.
"""

from __future__ import annotations

import csv
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .corpus import Corpus
from .personas import PersonaSegment
from .provenance import ProvenanceCard

_BAR_COLOR = "#3b6ea5"
_GAP_COLOR = "#c44e52"


def write_coverage_csv(persona: PersonaSegment, card: ProvenanceCard,
                       path: Path) -> None:
    """Delimited coverage table: label, artifact count, gap flag."""
    gap_set = set(card.topic_coverage["gaps"])
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["label", "count", "is_gap"])
        for label, count in persona.coverage.items():
            writer.writerow([label, count, "yes" if label in gap_set else "no"])


def render_coverage_figure(card: ProvenanceCard, path: Path) -> None:
    coverage = card.topic_coverage
    labels = [label for label, _ in coverage["covered"]] + list(coverage["gaps"])
    counts = [count for _, count in coverage["covered"]]
    counts += [0] * len(coverage["gaps"])
    colors = [_BAR_COLOR] * len(coverage["covered"]) + \
        [_GAP_COLOR] * len(coverage["gaps"])
    fig, ax = plt.subplots(figsize=(max(4, 0.9 * len(labels)), 3.2))
    ax.bar(range(len(labels)), counts, color=colors)
    ax.set_xticks(range(len(labels)))
    ax.set_xticklabels(labels, rotation=30, ha="right")
    ax.set_ylabel("artifacts")
    ax.set_title(f"Topic coverage: {card.persona_id}")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def render_monthly_volume(persona: PersonaSegment, corpus: Corpus,
                          path: Path) -> None:
    months: dict[str, int] = {}
    for artifact_id in persona.member_ids:
        month = corpus.artifact_by_id(artifact_id).created_at.strftime("%Y-%m")
        months[month] = months.get(month, 0) + 1
    keys = sorted(months)
    fig, ax = plt.subplots(figsize=(max(4, 0.7 * len(keys)), 3.2))
    ax.bar(range(len(keys)), [months[k] for k in keys], color=_BAR_COLOR)
    ax.set_xticks(range(len(keys)))
    ax.set_xticklabels(keys, rotation=45, ha="right")
    ax.set_ylabel("artifacts")
    ax.set_title(f"Evidence volume by month: {persona.persona_id}")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def render_channel_mix(persona: PersonaSegment, corpus: Corpus,
                       path: Path) -> None:
    channels: dict[str, int] = {}
    for artifact_id in persona.member_ids:
        channel = corpus.artifact_by_id(artifact_id).channel
        channels[channel] = channels.get(channel, 0) + 1
    keys = sorted(channels)
    fig, ax = plt.subplots(figsize=(4.2, 3.2))
    ax.pie([channels[k] for k in keys], labels=keys, autopct="%d%%")
    ax.set_title(f"Channel mix: {persona.persona_id}")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def render_report_figures(
    card: ProvenanceCard,
    persona: PersonaSegment,
    corpus: Corpus,
    out_dir: Path,
) -> list[Path]:
    """Write the delimited coverage table and all figures; returns paths."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    prefix = persona.persona_id
    outputs = {
        out_dir / f"{prefix}-coverage.csv":
            lambda p: write_coverage_csv(persona, card, p),
        out_dir / f"{prefix}-coverage.png": lambda p: render_coverage_figure(card, p),
        out_dir / f"{prefix}-volume.png":
            lambda p: render_monthly_volume(persona, corpus, p),
        out_dir / f"{prefix}-channels.png":
            lambda p: render_channel_mix(persona, corpus, p),
    }
    for path, render in outputs.items():
        render(path)
    return list(outputs)
